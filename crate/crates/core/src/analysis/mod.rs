//! Feature matrix assembly, scatter-matrix dispersion, pair ranking, LDA
//! and split validation.

mod lda;
mod scatter;
mod schema;
mod validate;

pub use lda::{lda_fit, LdaProjection};
pub use scatter::{alpha, rank_pairs, scatter_stats, PairAlpha, ScatterStats};
pub use schema::{feature_index, feature_names, FEATURE_COUNT, GROUP_COUNTS};
pub use validate::{cross_validate, fisher_yates, ConfusionMatrix};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// N x d matrix of painting feature vectors with per-row class labels.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    pub data: DMatrix<f64>,
    /// Class index per row, `0..class_names.len()`.
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(data: DMatrix<f64>, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        if data.nrows() != labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} rows but {} labels",
                data.nrows(),
                labels.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite feature value".into()));
        }
        let k = class_names.len();
        let mut counts = vec![0usize; k];
        for &l in &labels {
            if l >= k {
                return Err(Error::InvalidParameter(format!("label {l} out of range")));
            }
            counts[l] += 1;
        }
        if counts.contains(&0) {
            return Err(Error::InvalidParameter("empty class".into()));
        }
        Ok(Self {
            data,
            labels,
            class_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.data.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Row view of the matrix restricted to the given sample indices.
    pub fn subset_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let data = DMatrix::from_fn(rows.len(), self.n_features(), |i, j| {
            self.data[(rows[i], j)]
        });
        let labels = rows.iter().map(|&r| self.labels[r]).collect();
        FeatureMatrix {
            data,
            labels,
            class_names: self.class_names.clone(),
        }
    }
}

/// Result of z-scoring a feature matrix.
#[derive(Debug, Clone)]
pub struct Standardized {
    pub matrix: FeatureMatrix,
    pub means: Vec<f64>,
    /// Population standard deviations; 0 marks a constant column.
    pub sds: Vec<f64>,
    /// Columns that were constant and have been mapped to all-zeros.
    pub constant_columns: Vec<usize>,
}

/// Z-scores every column (population variance). Constant columns map to 0
/// and are flagged.
pub fn standardize(f: &FeatureMatrix) -> Standardized {
    let (n, d) = (f.n_samples(), f.n_features());
    let mut means = vec![0.0; d];
    let mut sds = vec![0.0; d];
    let mut constant_columns = Vec::new();
    let mut data = f.data.clone();
    for j in 0..d {
        let col = f.data.column(j);
        let mean = col.sum() / n as f64;
        let var = col.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        let sd = var.sqrt();
        means[j] = mean;
        sds[j] = sd;
        if sd == 0.0 {
            constant_columns.push(j);
            for i in 0..n {
                data[(i, j)] = 0.0;
            }
        } else {
            for i in 0..n {
                data[(i, j)] = (f.data[(i, j)] - mean) / sd;
            }
        }
    }
    if !constant_columns.is_empty() {
        log::warn!(
            "standardize: {} constant column(s) mapped to zero: {:?}",
            constant_columns.len(),
            constant_columns
        );
    }
    Standardized {
        matrix: FeatureMatrix {
            data,
            labels: f.labels.clone(),
            class_names: f.class_names.clone(),
        },
        means,
        sds,
        constant_columns,
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Two 4-point clusters offset by (10, 0): S_w = diag(2,2),
    /// S_b = diag(200,0).
    pub fn two_cluster_matrix() -> FeatureMatrix {
        let rows = [
            [0.0, 0.0],
            [1.0, 0.0],
            [0.0, 1.0],
            [1.0, 1.0],
            [10.0, 0.0],
            [11.0, 0.0],
            [10.0, 1.0],
            [11.0, 1.0],
        ];
        let data = DMatrix::from_fn(8, 2, |i, j| rows[i][j]);
        FeatureMatrix::new(
            data,
            vec![0, 0, 0, 0, 1, 1, 1, 1],
            vec!["a".into(), "b".into()],
        )
        .unwrap()
    }

    /// K isotropic Gaussian classes with means on a circle of radius
    /// `separation * 10 / (2 sin(pi/K))`-ish living in the first two of
    /// `dims` coordinates.
    pub fn gaussian_classes(
        k: usize,
        per_class: usize,
        dims: usize,
        mean_scale: f64,
        seed: u64,
    ) -> FeatureMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut data = DMatrix::zeros(k * per_class, dims);
        let mut labels = Vec::with_capacity(k * per_class);
        for class in 0..k {
            let angle = std::f64::consts::TAU * class as f64 / k as f64;
            for s in 0..per_class {
                let row = class * per_class + s;
                for j in 0..dims {
                    // Box-Muller on ChaCha keeps the construction seedable
                    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                    let u2: f64 = rng.gen_range(0.0..1.0);
                    let g = (-2.0 * u1.ln()).sqrt()
                        * (std::f64::consts::TAU * u2).cos();
                    data[(row, j)] = g;
                }
                data[(row, 0)] += mean_scale * angle.cos();
                data[(row, 1)] += mean_scale * angle.sin();
                labels.push(class);
            }
        }
        FeatureMatrix::new(
            data,
            labels,
            (0..k).map(|c| format!("class{c}")).collect(),
        )
        .unwrap()
    }
}
