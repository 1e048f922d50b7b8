//! Quantitative analysis of painting styles.
//!
//! The library turns a manifest of painting images into a 93-feature matrix
//! (Fourier energy, local entropy, Haralick texture, contour curvature and
//! superpixel shape statistics), ranks feature pairs by scatter-matrix
//! dispersion, projects with a linear discriminant, and measures the
//! chronological painter trajectory with opposition, skewness and
//! counter-dialectics indices.

pub mod analysis;
pub mod corpus;
pub mod curvature;
pub mod error;
pub mod features;
pub mod measures;
pub mod segmentation;
pub mod spectral;
pub mod texture;

pub use error::{Error, Result};
pub use features::{extract_features, ExtractionConfig};
