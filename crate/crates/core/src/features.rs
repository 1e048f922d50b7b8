//! Per-painting extraction of the full 93-component feature vector.

use crate::analysis::FEATURE_COUNT;
use crate::corpus::PreprocessedImage;
use crate::curvature::{
    curvature_series, detect_peaks, resample_contour, sample_count, curvature_block,
    DEFAULT_GAMMA, DEFAULT_SIGMA_FACTOR, MIN_CONTOUR_POINTS,
};
use crate::error::Result;
use crate::segmentation::{contour_length, segments_from_labels, shape_stats, slic_segment};
use crate::spectral::{energy_block, local_entropy_block};
use crate::texture::{haralick_block, quantize};

/// Parameters of the extraction stage. Every knob the algorithms expose,
/// with the defaults used throughout the test suites.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionConfig {
    pub slic_k: usize,
    pub slic_compactness: f64,
    pub slic_iterations: usize,
    pub glcm_levels: u16,
    pub curvature_gamma: f64,
    /// Gaussian spectral smoothing width as a fraction of the sample count.
    pub curvature_sigma_factor: f64,
    /// Contours shorter than this many pixels skip the curvature features.
    pub min_contour_points: usize,
    pub entropy_windows: (usize, usize),
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            slic_k: 128,
            slic_compactness: 10.0,
            slic_iterations: 10,
            glcm_levels: 64,
            curvature_gamma: DEFAULT_GAMMA,
            curvature_sigma_factor: DEFAULT_SIGMA_FACTOR,
            min_contour_points: MIN_CONTOUR_POINTS,
            entropy_windows: (5, 50),
        }
    }
}

/// Extracts the canonical feature vector of one preprocessed painting:
/// 36 energy, 2 local entropy, 44 Haralick, 5 curvature, 6 shape.
pub fn extract_features(
    image: &PreprocessedImage,
    config: &ExtractionConfig,
) -> Result<Vec<f64>> {
    let mut features = Vec::with_capacity(FEATURE_COUNT);

    features.extend_from_slice(&energy_block(image));
    features.extend_from_slice(&local_entropy_block(
        &image.luminance,
        config.entropy_windows,
    ));

    let quantized = quantize(&image.luminance, config.glcm_levels);
    features.extend_from_slice(&haralick_block(&quantized, config.glcm_levels)?);

    let labels = slic_segment(
        image,
        config.slic_k,
        config.slic_compactness,
        config.slic_iterations,
    )?;
    let segments = segments_from_labels(&labels)?;

    let mut peak_sets = Vec::new();
    for segment in &segments {
        if segment.contour.len() < config.min_contour_points {
            continue;
        }
        let t = sample_count(contour_length(&segment.contour));
        let contour = resample_contour(&segment.contour, t)?;
        let sigma = config.curvature_sigma_factor * t as f64;
        let series = curvature_series(&contour, Some(sigma), config.curvature_gamma)?;
        peak_sets.push(detect_peaks(&series, &contour));
    }
    features.extend_from_slice(&curvature_block(&peak_sets));

    features.extend_from_slice(&shape_stats(&segments)?.as_array());

    debug_assert_eq!(features.len(), FEATURE_COUNT);
    Ok(features)
}
