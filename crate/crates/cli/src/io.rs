//! CSV artifact writers and readers. Every file starts with a
//! `# config=<digest>` comment so artifacts are traceable to the parameters
//! that produced them.

use std::fs;
use std::path::Path;

use anyhow::Context;
use nalgebra::DMatrix;

use paintspace::analysis::{feature_names, ConfusionMatrix, FeatureMatrix, PairAlpha, FEATURE_COUNT};
use paintspace::corpus::{GrayHistogram, ManifestEntry};
use paintspace::measures::{MoveMeasures, TripleMeasures};

/// One painting row of features.csv.
#[derive(Debug, Clone)]
pub struct PaintingRow {
    pub features: Vec<f64>,
    pub painter: String,
    pub title: String,
    pub year: String,
}

fn comment_line(config_digest: &str, extra: &str) -> String {
    if extra.is_empty() {
        format!("# config={config_digest}\n")
    } else {
        format!("# config={config_digest} {extra}\n")
    }
}

pub fn write_features_csv(
    path: &Path,
    config_digest: &str,
    rows: &[PaintingRow],
) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    buf.extend_from_slice(comment_line(config_digest, "").as_bytes());
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let mut header = feature_names();
        header.extend(["painter".into(), "title".into(), "year".into()]);
        w.write_record(&header)?;
        for row in rows {
            let mut record: Vec<String> = row.features.iter().map(|v| format!("{v}")).collect();
            record.push(row.painter.clone());
            record.push(row.title.clone());
            record.push(row.year.clone());
            w.write_record(&record)?;
        }
        w.flush()?;
    }
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

pub fn read_features_csv(path: &Path) -> anyhow::Result<Vec<PaintingRow>> {
    let raw = fs::read_to_string(path).with_context(|| {
        format!(
            "{} not found: run `extract` first",
            path.display()
        )
    })?;
    let body = strip_comment(&raw);
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    {
        let headers = reader.headers()?;
        anyhow::ensure!(
            headers.len() == FEATURE_COUNT + 3,
            "{}: expected {} columns, found {}",
            path.display(),
            FEATURE_COUNT + 3,
            headers.len()
        );
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let features: Vec<f64> = (0..FEATURE_COUNT)
            .map(|i| record[i].parse::<f64>())
            .collect::<Result<_, _>>()
            .context("bad feature value")?;
        rows.push(PaintingRow {
            features,
            painter: record[FEATURE_COUNT].to_string(),
            title: record[FEATURE_COUNT + 1].to_string(),
            year: record[FEATURE_COUNT + 2].to_string(),
        });
    }
    Ok(rows)
}

fn strip_comment(raw: &str) -> &str {
    if raw.starts_with('#') {
        match raw.find('\n') {
            Some(pos) => &raw[pos + 1..],
            None => "",
        }
    } else {
        raw
    }
}

pub fn write_pairs_csv(
    path: &Path,
    config_digest: &str,
    ranked: &[PairAlpha],
) -> anyhow::Result<()> {
    let names = feature_names();
    let mut out = comment_line(config_digest, "");
    out.push_str("rank,feature_a,feature_b,alpha\n");
    for (i, pair) in ranked.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            names[pair.feature_a],
            names[pair.feature_b],
            pair.alpha
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Top-ranked pair of a pairs.csv: (feature_a, feature_b, alpha).
pub fn read_top_pair(path: &Path) -> anyhow::Result<(String, String, f64)> {
    let raw = fs::read_to_string(path).with_context(|| {
        format!("{} not found: run `rank` first", path.display())
    })?;
    let body = strip_comment(&raw);
    let mut lines = body.lines();
    let _header = lines.next();
    let first = lines
        .next()
        .ok_or_else(|| anyhow::anyhow!("{}: no ranked pairs", path.display()))?;
    let fields: Vec<&str> = first.split(',').collect();
    anyhow::ensure!(fields.len() == 4, "{}: bad pair row", path.display());
    Ok((
        fields[1].to_string(),
        fields[2].to_string(),
        fields[3].parse()?,
    ))
}

pub fn write_confusion_csv(
    path: &Path,
    config_digest: &str,
    cm: &ConfusionMatrix,
) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    buf.extend_from_slice(
        comment_line(
            config_digest,
            &format!("seed={} repetitions={}", cm.seed, cm.repetitions),
        )
        .as_bytes(),
    );
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let mut header = vec!["painter".to_string()];
        header.extend(cm.class_names.iter().cloned());
        w.write_record(&header)?;
        for (i, name) in cm.class_names.iter().enumerate() {
            let mut record = vec![name.clone()];
            for j in 0..cm.class_names.len() {
                record.push(format!("{}", cm.mean_counts[(i, j)]));
            }
            w.write_record(&record)?;
        }
        w.flush()?;
    }
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

pub fn write_measures_csv(
    path: &Path,
    config_digest: &str,
    space_tag: &str,
    moves: &[MoveMeasures],
    triples: &[TripleMeasures],
) -> anyhow::Result<()> {
    let mut out = comment_line(config_digest, &format!("space={space_tag}"));
    out.push_str("move,from,to,W,s\n");
    for (i, m) in moves.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            i + 1,
            m.from,
            m.to,
            m.opposition,
            m.skewness
        ));
    }
    out.push_str("triple,i,j,k,d\n");
    for (i, t) in triples.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            i + 1,
            t.first,
            t.second,
            t.third,
            t.counter_dialectics
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_histogram_csv(
    path: &Path,
    config_digest: &str,
    hist: &GrayHistogram,
) -> anyhow::Result<()> {
    let mut out = comment_line(config_digest, "");
    out.push_str("index,mass\n");
    for (i, &mass) in hist.bins.iter().enumerate() {
        out.push_str(&format!("{i},{mass}\n"));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn read_histogram_csv(path: &Path) -> anyhow::Result<GrayHistogram> {
    let raw = fs::read_to_string(path)?;
    let body = strip_comment(&raw);
    let mut bins = Vec::with_capacity(256);
    for line in body.lines().skip(1) {
        let (_, mass) = line
            .split_once(',')
            .ok_or_else(|| anyhow::anyhow!("bad histogram row {line:?}"))?;
        bins.push(mass.parse::<f64>()?);
    }
    anyhow::ensure!(bins.len() == 256, "expected 256 bins, got {}", bins.len());
    Ok(GrayHistogram { bins })
}

/// Builds the analysis matrix from feature rows. Painter class indices
/// follow the chronological manifest order.
pub fn feature_matrix_from_rows(
    rows: &[PaintingRow],
    manifest: &[ManifestEntry],
) -> anyhow::Result<FeatureMatrix> {
    let painters = paintspace::corpus::painter_order(manifest);
    let class_of = |painter: &str| -> anyhow::Result<usize> {
        painters
            .iter()
            .position(|(p, _)| p == painter)
            .ok_or_else(|| anyhow::anyhow!("painter {painter:?} not in manifest"))
    };
    let mut labels = Vec::with_capacity(rows.len());
    for row in rows {
        labels.push(class_of(&row.painter)?);
    }
    let data = DMatrix::from_fn(rows.len(), FEATURE_COUNT, |i, j| rows[i].features[j]);
    Ok(FeatureMatrix::new(
        data,
        labels,
        painters.into_iter().map(|(p, _)| p).collect(),
    )?)
}

/// File-system-safe name for per-painter artifacts.
pub fn safe_name(painter: &str) -> String {
    painter
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}
