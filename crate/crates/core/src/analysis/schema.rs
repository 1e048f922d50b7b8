//! Canonical 93-feature schema: 36 energy, 2 local entropy, 44 Haralick,
//! 5 curvature, 6 shape, in that order.

use crate::corpus::PreprocessedImage;
use crate::texture::HARALICK_NAMES;

/// Total number of features.
pub const FEATURE_COUNT: usize = 93;

/// Group sizes in schema order.
pub const GROUP_COUNTS: [(&str, usize); 5] = [
    ("energy", 36),
    ("local_entropy", 2),
    ("haralick", 44),
    ("curvature", 5),
    ("shape", 6),
];

const ENERGY_STATS: [&str; 9] = [
    "total",
    "row_mean",
    "row_sd",
    "col_mean",
    "col_sd",
    "row_centroid",
    "col_centroid",
    "rowcol_mean",
    "rowcol_sd",
];

const CURVATURE_NAMES: [&str; 5] = [
    "curvature_peak_gap_geo_mean",
    "curvature_peak_gap_px_mean",
    "curvature_peak_gap_geo_sd",
    "curvature_peak_gap_px_sd",
    "curvature_peak_count_mean",
];

const SHAPE_NAMES: [&str; 6] = [
    "segment_perimeter_mean",
    "segment_area_mean",
    "segment_circularity_mean",
    "segment_count",
    "segment_hull_area_mean",
    "segment_hull_ratio_mean",
];

/// The ordered canonical feature names.
pub fn feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(FEATURE_COUNT);
    for stat in ENERGY_STATS {
        for ch in PreprocessedImage::CHANNEL_NAMES {
            names.push(format!("energy_{stat}_{ch}"));
        }
    }
    names.push("local_entropy_w5".into());
    names.push("local_entropy_w50".into());
    for feat in HARALICK_NAMES {
        for adj in 1..=4 {
            names.push(format!("haralick_{feat}_adj{adj}"));
        }
    }
    names.extend(CURVATURE_NAMES.iter().map(|s| s.to_string()));
    names.extend(SHAPE_NAMES.iter().map(|s| s.to_string()));
    names
}

/// Index of a canonical feature name.
pub fn feature_index(name: &str) -> Option<usize> {
    feature_names().iter().position(|n| n == name)
}
