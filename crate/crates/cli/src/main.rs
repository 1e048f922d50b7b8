//! CLI entry point. Exit codes: 0 success, 1 input error, 2 numerical
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use paintspace_cli::config::{PipelineConfig, Space};
use paintspace_cli::pipeline;
use paintspace_cli::synth;

#[derive(Parser)]
#[command(
    name = "paintspace",
    about = "Painting-corpus feature extraction, projection and style-trajectory measures",
    version
)]
struct Cli {
    /// TOML configuration file; flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed of the split-validation generator.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Manifest CSV (painter,title,year,source,rank).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    /// Active 2-D space for the measures: best-pair or lda.
    #[arg(long, global = true)]
    space: Option<Space>,

    /// Extraction worker threads (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download URL sources and write a local manifest.
    Fetch,
    /// Decode, preprocess and extract the 93 features per painting.
    Extract,
    /// Rank every feature pair by the scatter dispersion index.
    Rank,
    /// Fit the discriminant projection and write the validation confusion matrix.
    Lda,
    /// Opposition, skewness and counter-dialectics over the painter trajectory.
    Measures,
    /// Write report.json and the SVG figures.
    Report,
    /// Run every stage in order.
    All,
    /// Generate the synthetic 12-painter test corpus.
    Synth {
        /// Paintings per painter.
        #[arg(long, default_value_t = 4)]
        per_painter: usize,
        /// Canvas side in pixels.
        #[arg(long, default_value_t = 800)]
        size: u32,
    },
}

fn build_config(cli: &Cli) -> anyhow::Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(manifest) = &cli.manifest {
        cfg.manifest = manifest.clone();
    }
    if let Some(space) = cli.space {
        cfg.space = space;
    }
    if let Some(jobs) = cli.jobs {
        cfg.jobs = jobs;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let cfg = build_config(&cli)?;
    std::fs::create_dir_all(&cfg.out_dir)?;

    if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build_global()
            .ok();
    }

    match cli.command {
        Command::Fetch => {
            let manifest = pipeline::stage_fetch(&cfg)?;
            println!("fetched corpus manifest: {}", manifest.display());
        }
        Command::Extract => {
            let rows = pipeline::stage_extract(&cfg)?;
            println!("extracted {} paintings -> {}", rows.len(), cfg.out_dir.join("features.csv").display());
        }
        Command::Rank => {
            pipeline::stage_rank(&cfg)?;
            println!("ranked pairs -> {}", cfg.out_dir.join("pairs.csv").display());
        }
        Command::Lda => {
            let cm = pipeline::stage_lda(&cfg)?;
            println!(
                "confusion matrix (mean diagonal {:.3}) -> {}",
                cm.mean_diagonal(),
                cfg.out_dir.join("confusion.csv").display()
            );
        }
        Command::Measures => {
            pipeline::stage_measures(&cfg)?;
            println!(
                "measures ({}) -> {}",
                cfg.space.tag(),
                cfg.out_dir.join("measures.csv").display()
            );
        }
        Command::Report => {
            let report = pipeline::stage_report(&cfg, Instant::now())?;
            println!(
                "report -> {} (top pair {} x {}, alpha {:.3})",
                cfg.out_dir.join("report.json").display(),
                report.top_pair.feature_a,
                report.top_pair.feature_b,
                report.top_pair.alpha
            );
        }
        Command::All => {
            let report = pipeline::run_all(&cfg)?;
            println!(
                "pipeline complete in {:.1}s: top pair {} x {} (alpha {:.3}), mean diagonal {:.3}",
                report.timing_seconds,
                report.top_pair.feature_a,
                report.top_pair.feature_b,
                report.top_pair.alpha,
                report.confusion.mean_diagonal
            );
        }
        Command::Synth { per_painter, size } => {
            let dir = cfg.out_dir.join("synthetic");
            let manifest = synth::generate_corpus(&dir, per_painter, size, cfg.seed)?;
            println!("synthetic corpus manifest: {}", manifest.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let numerical = err
                .chain()
                .any(|cause| matches!(cause.downcast_ref::<paintspace::Error>(), Some(e) if !e.is_input_error()));
            if numerical {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
