//! Corpus ingestion: painting manifests, image preprocessing, gray-level
//! histograms.
//!
//! The manifest is a CSV with header `painter,title,year,source,rank`.
//! `rank` orders painters chronologically and must be consistent: one rank
//! per painter, one painter per rank.

mod image_ops;

pub use image_ops::{
    equalize_channel, gray_histogram, luminance_bt601, mean_histogram, median_filter_3x3,
    otsu_threshold, preprocess, preprocess_raster, to_binary, GrayHistogram, PreprocessedImage,
    IMAGE_SIZE,
};

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One painting in the corpus manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub painter_id: String,
    pub painting_title: String,
    /// Free-form creation year, e.g. "1618/20".
    pub year: String,
    /// File path or URL of the raw image.
    pub source: String,
    /// Chronological position of the painter (0 = earliest).
    pub chronological_rank: u32,
}

/// Loads and validates a manifest CSV.
///
/// Entries are returned in file order. Rejects empty painter ids, duplicate
/// sources and inconsistent painter/rank assignments, naming the offending
/// row (1-based, excluding the header).
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let err_at = |row: usize, message: String| Error::Manifest {
        path: path.to_path_buf(),
        row,
        message,
    };

    let raw = std::fs::read(path)?;
    if raw.is_empty() {
        log::warn!("manifest {} is empty", path.display());
        return Ok(Vec::new());
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(raw.as_slice());

    {
        let headers = reader.headers()?;
        let expected = ["painter", "title", "year", "source", "rank"];
        let got: Vec<&str> = headers.iter().map(str::trim).collect();
        if got != expected {
            return Err(err_at(
                0,
                format!("bad header {:?}, expected {:?}", got, expected),
            ));
        }
    }

    let mut entries = Vec::new();
    let mut seen_sources: HashMap<String, usize> = HashMap::new();
    let mut painter_rank: HashMap<String, (u32, usize)> = HashMap::new();
    let mut rank_painter: HashMap<u32, (String, usize)> = HashMap::new();

    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| err_at(row, e.to_string()))?;
        if record.len() != 5 {
            return Err(err_at(row, format!("expected 5 fields, got {}", record.len())));
        }
        let painter_id = record[0].trim().to_string();
        if painter_id.is_empty() {
            return Err(err_at(row, "empty painter id".into()));
        }
        let source = record[3].trim().to_string();
        if source.is_empty() {
            return Err(err_at(row, "empty source".into()));
        }
        if let Some(first) = seen_sources.insert(source.clone(), row) {
            return Err(err_at(
                row,
                format!("duplicate source {:?} (first seen at row {})", source, first),
            ));
        }
        let rank: u32 = record[4]
            .trim()
            .parse()
            .map_err(|_| err_at(row, format!("bad rank {:?}", &record[4])))?;

        match painter_rank.get(&painter_id) {
            Some(&(r, first)) if r != rank => {
                return Err(err_at(
                    row,
                    format!(
                        "painter {:?} has rank {} here but rank {} at row {}",
                        painter_id, rank, r, first
                    ),
                ));
            }
            None => {
                if let Some((other, first)) = rank_painter.get(&rank) {
                    return Err(err_at(
                        row,
                        format!(
                            "rank {} already used by painter {:?} at row {}",
                            rank, other, first
                        ),
                    ));
                }
                painter_rank.insert(painter_id.clone(), (rank, row));
                rank_painter.insert(rank, (painter_id.clone(), row));
            }
            _ => {}
        }

        entries.push(ManifestEntry {
            painter_id,
            painting_title: record[1].trim().to_string(),
            year: record[2].trim().to_string(),
            source,
            chronological_rank: rank,
        });
    }

    if entries.is_empty() {
        log::warn!("manifest {} has a header but no rows", path.display());
    } else {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for e in &entries {
            *counts.entry(e.painter_id.as_str()).or_default() += 1;
        }
        let mut per_painter: Vec<(&str, usize)> = counts.into_iter().collect();
        per_painter.sort();
        log::info!(
            "manifest {}: {} paintings, {} painters {:?}",
            path.display(),
            entries.len(),
            per_painter.len(),
            per_painter
        );
    }
    Ok(entries)
}

/// Distinct painters of a manifest, ordered by chronological rank.
pub fn painter_order(entries: &[ManifestEntry]) -> Vec<(String, u32)> {
    let mut painters: Vec<(String, u32)> = Vec::new();
    for e in entries {
        if !painters.iter().any(|(p, _)| p == &e.painter_id) {
            painters.push((e.painter_id.clone(), e.chronological_rank));
        }
    }
    painters.sort_by_key(|&(_, r)| r);
    painters
}

/// Resolves a manifest source relative to the manifest's own directory
/// (absolute paths and URLs pass through).
pub fn resolve_source(manifest_path: &Path, source: &str) -> PathBuf {
    let p = Path::new(source);
    if p.is_absolute() || source.contains("://") {
        return p.to_path_buf();
    }
    match manifest_path.parent() {
        Some(dir) => dir.join(p),
        None => p.to_path_buf(),
    }
}
