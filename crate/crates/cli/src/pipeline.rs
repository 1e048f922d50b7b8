//! Pipeline stages: extract features, rank pairs, LDA validation,
//! trajectory measures, report and plots. Each stage reads its upstream
//! artifacts from the output directory, so stages compose the same way the
//! `all` subcommand chains them.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use paintspace::analysis::{
    cross_validate, feature_index, feature_names, lda_fit, rank_pairs, standardize,
    ConfusionMatrix, FeatureMatrix, FEATURE_COUNT, GROUP_COUNTS,
};
use paintspace::corpus::{
    gray_histogram, load_manifest, mean_histogram, painter_order, preprocess, resolve_source,
    GrayHistogram, ManifestEntry,
};
use paintspace::measures::{all_moves, all_triples, build_prototypes, TimeSeries};

use crate::config::{digest_bytes, PipelineConfig, Space};
use crate::io::{
    feature_matrix_from_rows, read_features_csv, read_histogram_csv, read_top_pair, safe_name,
    write_confusion_csv, write_features_csv, write_histogram_csv, write_measures_csv,
    write_pairs_csv, PaintingRow,
};
use crate::plot;

pub struct Paths {
    pub out: PathBuf,
}

impl Paths {
    pub fn new(out: &Path) -> Self {
        Self { out: out.to_path_buf() }
    }

    pub fn features(&self) -> PathBuf {
        self.out.join("features.csv")
    }
    pub fn pairs(&self) -> PathBuf {
        self.out.join("pairs.csv")
    }
    pub fn confusion(&self) -> PathBuf {
        self.out.join("confusion.csv")
    }
    pub fn measures(&self) -> PathBuf {
        self.out.join("measures.csv")
    }
    pub fn report(&self) -> PathBuf {
        self.out.join("report.json")
    }
    pub fn cache(&self) -> PathBuf {
        self.out.join("cache")
    }
    pub fn histograms(&self) -> PathBuf {
        self.out.join("histograms")
    }
    pub fn plots(&self) -> PathBuf {
        self.out.join("plots")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CachedPainting {
    features: Vec<f64>,
    gray_hist: Vec<f64>,
}

/// Decodes, preprocesses and extracts one painting, or loads it from cache.
fn extract_one(
    cfg: &PipelineConfig,
    paths: &Paths,
    entry: &ManifestEntry,
) -> anyhow::Result<(Vec<f64>, GrayHistogram)> {
    let source = resolve_source(&cfg.manifest, &entry.source);
    let bytes = std::fs::read(&source).with_context(|| {
        format!(
            "painting {:?} ({}): cannot read {}",
            entry.painting_title,
            entry.painter_id,
            source.display()
        )
    })?;
    let key = format!(
        "{}-{}.json",
        &digest_bytes(&bytes)[..16],
        cfg.feature_digest()
    );
    let cache_file = paths.cache().join(&key);
    if let Ok(raw) = std::fs::read(&cache_file) {
        if let Ok(cached) = serde_json::from_slice::<CachedPainting>(&raw) {
            if cached.features.len() == FEATURE_COUNT && cached.gray_hist.len() == 256 {
                return Ok((
                    cached.features,
                    GrayHistogram {
                        bins: cached.gray_hist,
                    },
                ));
            }
        }
    }

    let image = preprocess(&source).with_context(|| {
        format!(
            "painting {:?} ({})",
            entry.painting_title, entry.painter_id
        )
    })?;
    let features = paintspace::extract_features(&image, &cfg.extraction()).with_context(|| {
        format!(
            "painting {:?} ({})",
            entry.painting_title, entry.painter_id
        )
    })?;
    let hist = gray_histogram(&image.luminance);

    let cached = CachedPainting {
        features: features.clone(),
        gray_hist: hist.bins.clone(),
    };
    std::fs::write(&cache_file, serde_json::to_vec(&cached)?)
        .with_context(|| format!("writing cache {}", cache_file.display()))?;
    Ok((features, hist))
}

/// Stage 1: manifest -> features.csv + per-painter mean gray histograms.
pub fn stage_extract(cfg: &PipelineConfig) -> anyhow::Result<Vec<PaintingRow>> {
    let paths = Paths::new(&cfg.out_dir);
    std::fs::create_dir_all(paths.cache())?;
    std::fs::create_dir_all(paths.histograms())?;

    let entries = load_manifest(&cfg.manifest)?;
    anyhow::ensure!(
        !entries.is_empty(),
        "manifest {} has no paintings",
        cfg.manifest.display()
    );

    let results: Vec<anyhow::Result<(Vec<f64>, GrayHistogram)>> = entries
        .par_iter()
        .map(|entry| extract_one(cfg, &paths, entry))
        .collect();

    let mut rows = Vec::with_capacity(entries.len());
    let mut by_painter: HashMap<&str, Vec<GrayHistogram>> = HashMap::new();
    for (entry, result) in entries.iter().zip(results) {
        let (features, hist) = result?;
        by_painter
            .entry(entry.painter_id.as_str())
            .or_default()
            .push(hist);
        rows.push(PaintingRow {
            features,
            painter: entry.painter_id.clone(),
            title: entry.painting_title.clone(),
            year: entry.year.clone(),
        });
    }

    let digest = cfg.feature_digest();
    write_features_csv(&paths.features(), &digest, &rows)?;
    for (painter, _) in painter_order(&entries) {
        let hists = &by_painter[painter.as_str()];
        let mean = mean_histogram(hists);
        write_histogram_csv(
            &paths.histograms().join(format!("{}.csv", safe_name(&painter))),
            &digest,
            &mean,
        )?;
    }
    log::info!("extracted {} paintings", rows.len());
    Ok(rows)
}

fn load_matrix(cfg: &PipelineConfig) -> anyhow::Result<(Vec<PaintingRow>, FeatureMatrix)> {
    let paths = Paths::new(&cfg.out_dir);
    let rows = read_features_csv(&paths.features())?;
    let entries = load_manifest(&cfg.manifest)?;
    let matrix = feature_matrix_from_rows(&rows, &entries)?;
    Ok((rows, matrix))
}

/// Stage 2: features.csv -> pairs.csv (all pairs, ranked by alpha).
pub fn stage_rank(cfg: &PipelineConfig) -> anyhow::Result<()> {
    let paths = Paths::new(&cfg.out_dir);
    let (_, matrix) = load_matrix(cfg)?;
    let standardized = standardize(&matrix);
    let ranked = rank_pairs(&standardized.matrix)?;
    write_pairs_csv(&paths.pairs(), &cfg.feature_digest(), &ranked)?;
    let names = feature_names();
    log::info!(
        "top pair: {} x {} (alpha {:.3})",
        names[ranked[0].feature_a],
        names[ranked[0].feature_b],
        ranked[0].alpha
    );
    Ok(())
}

/// Stage 3: features.csv -> confusion.csv via repeated 50/50 splits.
pub fn stage_lda(cfg: &PipelineConfig) -> anyhow::Result<ConfusionMatrix> {
    let paths = Paths::new(&cfg.out_dir);
    let (_, matrix) = load_matrix(cfg)?;
    let standardized = standardize(&matrix);
    let cm = cross_validate(&standardized.matrix, cfg.repetitions, cfg.seed)?;
    write_confusion_csv(&paths.confusion(), &cfg.feature_digest(), &cm)?;
    log::info!(
        "confusion over {} repetitions: mean diagonal {:.2}",
        cm.repetitions,
        cm.mean_diagonal()
    );
    Ok(cm)
}

/// Active-space coordinates of every painting, in row order.
fn active_coords(
    cfg: &PipelineConfig,
    matrix: &FeatureMatrix,
) -> anyhow::Result<(Vec<Vec<f64>>, String, String)> {
    let standardized = standardize(matrix);
    match cfg.space {
        Space::BestPair => {
            let paths = Paths::new(&cfg.out_dir);
            let (name_a, name_b, _) = read_top_pair(&paths.pairs())?;
            let a = feature_index(&name_a)
                .ok_or_else(|| anyhow::anyhow!("unknown feature {name_a:?} in pairs.csv"))?;
            let b = feature_index(&name_b)
                .ok_or_else(|| anyhow::anyhow!("unknown feature {name_b:?} in pairs.csv"))?;
            let coords = (0..matrix.n_samples())
                .map(|i| {
                    vec![
                        standardized.matrix.data[(i, a)],
                        standardized.matrix.data[(i, b)],
                    ]
                })
                .collect();
            Ok((coords, name_a, name_b))
        }
        Space::Lda => {
            let model = lda_fit(&standardized.matrix, 2)?;
            let coords = (0..matrix.n_samples())
                .map(|i| {
                    let x = DVector::from_fn(matrix.n_features(), |j, _| {
                        standardized.matrix.data[(i, j)]
                    });
                    let p = model.project(&x);
                    vec![p[0], p[1]]
                })
                .collect();
            Ok((coords, "discriminant 1".into(), "discriminant 2".into()))
        }
    }
}

fn time_series(
    cfg: &PipelineConfig,
    matrix: &FeatureMatrix,
    entries: &[ManifestEntry],
) -> anyhow::Result<(Vec<Vec<f64>>, TimeSeries, String, String)> {
    let (coords, label_x, label_y) = active_coords(cfg, matrix)?;
    let painters = painter_order(entries);
    let series = build_prototypes(&coords, &matrix.labels, &painters)?;
    Ok((coords, series, label_x, label_y))
}

/// Stage 4: features.csv (+ pairs.csv for the best-pair space) ->
/// measures.csv with one section per index family.
pub fn stage_measures(cfg: &PipelineConfig) -> anyhow::Result<()> {
    let paths = Paths::new(&cfg.out_dir);
    let (_, matrix) = load_matrix(cfg)?;
    let entries = load_manifest(&cfg.manifest)?;
    let (_, series, _, _) = time_series(cfg, &matrix, &entries)?;
    let moves = all_moves(&series)?;
    let triples = all_triples(&series)?;
    write_measures_csv(
        &paths.measures(),
        &cfg.feature_digest(),
        cfg.space.tag(),
        &moves,
        &triples,
    )?;
    log::info!(
        "measures in {} space: {} moves, {} triples",
        cfg.space.tag(),
        moves.len(),
        triples.len()
    );
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub config: PipelineConfig,
    pub config_digest: String,
    pub feature_matrix_digest: String,
    pub schema: SchemaEcho,
    pub space: String,
    pub top_pair: TopPair,
    pub confusion: ConfusionSummary,
    pub moves: Vec<MoveEcho>,
    pub triples: Vec<TripleEcho>,
    pub timing_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct SchemaEcho {
    pub feature_count: usize,
    pub groups: Vec<(String, usize)>,
}

#[derive(Debug, Serialize)]
pub struct TopPair {
    pub feature_a: String,
    pub feature_b: String,
    pub alpha: f64,
}

#[derive(Debug, Serialize)]
pub struct ConfusionSummary {
    pub repetitions: usize,
    pub seed: u64,
    pub mean_diagonal: f64,
    pub accuracy: f64,
}

#[derive(Debug, Serialize)]
pub struct MoveEcho {
    pub from: String,
    pub to: String,
    pub opposition: f64,
    pub skewness: f64,
}

#[derive(Debug, Serialize)]
pub struct TripleEcho {
    pub first: String,
    pub second: String,
    pub third: String,
    pub counter_dialectics: f64,
}

/// Stage 5: aggregate everything into report.json and the SVG figures.
pub fn stage_report(cfg: &PipelineConfig, started: Instant) -> anyhow::Result<RunReport> {
    let paths = Paths::new(&cfg.out_dir);
    std::fs::create_dir_all(paths.plots())?;
    let digest = cfg.feature_digest();

    let (_, matrix) = load_matrix(cfg)?;
    let entries = load_manifest(&cfg.manifest)?;
    let (top_a, top_b, top_alpha) = read_top_pair(&paths.pairs())?;
    let standardized = standardize(&matrix);
    let cm = cross_validate(&standardized.matrix, cfg.repetitions, cfg.seed)?;

    let (coords, series, label_x, label_y) = time_series(cfg, &matrix, &entries)?;
    let moves = all_moves(&series)?;
    let triples = all_triples(&series)?;

    // scatter of the painting space
    let points: Vec<(usize, f64, f64)> = coords
        .iter()
        .zip(matrix.labels.iter())
        .map(|(c, &l)| (l, c[0], c[1]))
        .collect();
    let trajectory: Vec<(f64, f64)> = series
        .states()
        .iter()
        .map(|p| (p.coords[0], p.coords[1]))
        .collect();
    std::fs::write(
        paths.plots().join("painting_space.svg"),
        plot::scatter_plot(
            &digest,
            &format!("painting space ({})", cfg.space.tag()),
            &label_x,
            &label_y,
            &matrix.class_names,
            &points,
            &trajectory,
        ),
    )?;

    // opposition/skewness and counter-dialectics line plots
    let move_labels: Vec<String> = moves.iter().map(|m| format!("{}->{}", m.from, m.to)).collect();
    std::fs::write(
        paths.plots().join("opposition_skewness.svg"),
        plot::line_plot(
            &digest,
            "opposition W and skewness s per move",
            "move",
            &[
                ("W", moves.iter().map(|m| m.opposition).collect()),
                ("s", moves.iter().map(|m| m.skewness).collect()),
            ],
            &move_labels,
        ),
    )?;
    let triple_labels: Vec<String> = triples.iter().map(|t| t.third.clone()).collect();
    std::fs::write(
        paths.plots().join("counter_dialectics.svg"),
        plot::line_plot(
            &digest,
            "counter-dialectics d per consecutive triple",
            "triple",
            &[(
                "d",
                triples.iter().map(|t| t.counter_dialectics).collect(),
            )],
            &triple_labels,
        ),
    )?;

    // gray histogram overlay from the per-painter artifacts
    let painters = painter_order(&entries);
    let mut hists = Vec::new();
    for (painter, _) in &painters {
        let path = paths.histograms().join(format!("{}.csv", safe_name(painter)));
        hists.push(read_histogram_csv(&path).with_context(|| {
            format!("{} missing: run `extract` first", path.display())
        })?);
    }
    std::fs::write(
        paths.plots().join("gray_histograms.svg"),
        plot::histogram_overlay(
            &digest,
            "mean gray-level histograms per painter",
            &painters.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>(),
            &hists,
        ),
    )?;

    let features_bytes = std::fs::read(paths.features())?;
    let report = RunReport {
        config: cfg.clone(),
        config_digest: digest,
        feature_matrix_digest: digest_bytes(&features_bytes),
        schema: SchemaEcho {
            feature_count: FEATURE_COUNT,
            groups: GROUP_COUNTS
                .iter()
                .map(|&(g, n)| (g.to_string(), n))
                .collect(),
        },
        space: cfg.space.tag().to_string(),
        top_pair: TopPair {
            feature_a: top_a,
            feature_b: top_b,
            alpha: top_alpha,
        },
        confusion: ConfusionSummary {
            repetitions: cm.repetitions,
            seed: cm.seed,
            mean_diagonal: cm.mean_diagonal(),
            accuracy: cm.accuracy(),
        },
        moves: moves
            .iter()
            .map(|m| MoveEcho {
                from: m.from.clone(),
                to: m.to.clone(),
                opposition: m.opposition,
                skewness: m.skewness,
            })
            .collect(),
        triples: triples
            .iter()
            .map(|t| TripleEcho {
                first: t.first.clone(),
                second: t.second.clone(),
                third: t.third.clone(),
                counter_dialectics: t.counter_dialectics,
            })
            .collect(),
        timing_seconds: started.elapsed().as_secs_f64(),
    };
    std::fs::write(
        paths.report(),
        serde_json::to_string_pretty(&report)? + "\n",
    )?;
    Ok(report)
}

/// Runs every stage in order.
pub fn run_all(cfg: &PipelineConfig) -> anyhow::Result<RunReport> {
    let started = Instant::now();
    stage_extract(cfg)?;
    stage_rank(cfg)?;
    stage_lda(cfg)?;
    stage_measures(cfg)?;
    stage_report(cfg, started)
}

/// Downloads URL sources next to the manifest rewrite; local paths pass
/// through untouched. Returns the rewritten manifest path.
pub fn stage_fetch(cfg: &PipelineConfig) -> anyhow::Result<PathBuf> {
    let entries = load_manifest(&cfg.manifest)?;
    let corpus_dir = cfg.out_dir.join("corpus");
    std::fs::create_dir_all(&corpus_dir)?;

    let mut manifest = String::from("painter,title,year,source,rank\n");
    let mut writer = csv::Writer::from_writer(Vec::new());
    for entry in &entries {
        let source = if entry.source.contains("://") {
            let ext = entry
                .source
                .rsplit('.')
                .next()
                .filter(|e| e.len() <= 4)
                .unwrap_or("png");
            let name = format!("{}.{ext}", &digest_bytes(entry.source.as_bytes())[..16]);
            let dest = corpus_dir.join(&name);
            if !dest.exists() {
                log::info!("fetching {}", entry.source);
                let response = ureq::get(&entry.source)
                    .call()
                    .with_context(|| format!("fetching {}", entry.source))?;
                let mut bytes = Vec::new();
                std::io::copy(&mut response.into_reader(), &mut bytes)?;
                std::fs::write(&dest, bytes)?;
            }
            name
        } else {
            // keep local paths as-is, resolved against the original manifest
            resolve_source(&cfg.manifest, &entry.source)
                .to_string_lossy()
                .into_owned()
        };
        writer.write_record([
            entry.painter_id.as_str(),
            entry.painting_title.as_str(),
            entry.year.as_str(),
            source.as_str(),
            &entry.chronological_rank.to_string(),
        ])?;
    }
    manifest.push_str(&String::from_utf8(writer.into_inner()?)?);
    let out = corpus_dir.join("manifest.csv");
    std::fs::write(&out, manifest)?;
    log::info!("wrote {}", out.display());
    Ok(out)
}
