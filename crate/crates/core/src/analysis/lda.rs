//! Linear discriminant projection: top eigenvectors of S_w^-1 S_b via
//! Cholesky whitening, nearest-centroid classification in the projected
//! plane.

use nalgebra::{Cholesky, DMatrix, DVector};

use super::{scatter_stats, FeatureMatrix};
use crate::error::{Error, Result};

/// A fitted projection onto the leading discriminant directions.
#[derive(Debug, Clone)]
pub struct LdaProjection {
    /// d x dims basis, unit-norm columns, largest-|entry| sign positive.
    pub basis: DMatrix<f64>,
    /// Eigenvalues of S_w^-1 S_b for the kept directions, descending.
    pub eigenvalues: Vec<f64>,
    /// Class centroids of the training data in projected space.
    pub centroids: Vec<DVector<f64>>,
    pub class_names: Vec<String>,
}

/// Fits the discriminant basis. `dims` is normally 2; when fewer positive
/// eigenvalues exist the remaining directions are padded from the next
/// eigenvectors (with a warning).
pub fn lda_fit(f: &FeatureMatrix, dims: usize) -> Result<LdaProjection> {
    let d = f.n_features();
    if dims == 0 || dims > d {
        return Err(Error::InvalidParameter(format!(
            "dims {dims} out of range 1..={d}"
        )));
    }
    let stats = scatter_stats(f, &(0..d).collect::<Vec<_>>())?;
    let trace_w = stats.within.trace();
    if trace_w == 0.0 {
        return Err(Error::Numerical("within-class scatter is zero".into()));
    }

    // Whiten: S_w = L L^T, solve the symmetric eigenproblem of
    // L^-1 S_b L^-T, then map eigenvectors back through L^-T.
    let chol = cholesky_with_fallback(&stats.within, trace_w)?;
    let linv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let sym = &linv * &stats.between * linv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5; // clean tiny asymmetry

    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let positive = order
        .iter()
        .take(dims)
        .filter(|&&i| eig.eigenvalues[i] > 1e-12)
        .count();
    if positive < dims {
        log::warn!(
            "only {positive} positive discriminant eigenvalues for {dims} dims; padding"
        );
    }

    let mut basis = DMatrix::zeros(d, dims);
    let mut eigenvalues = Vec::with_capacity(dims);
    for (col, &i) in order.iter().take(dims).enumerate() {
        let v = eig.eigenvectors.column(i);
        let mut w = linv.transpose() * v; // back from whitened space
        let norm = w.norm();
        if norm > 0.0 {
            w /= norm;
        }
        // sign convention: largest-magnitude entry positive
        let lead = w
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).expect("finite"))
            .map(|(i, _)| i)
            .unwrap_or(0);
        if w[lead] < 0.0 {
            w = -w;
        }
        basis.set_column(col, &w);
        eigenvalues.push(eig.eigenvalues[i]);
    }

    let projected = &f.data * &basis;
    let counts = f.class_counts();
    let mut centroids = vec![DVector::zeros(dims); f.n_classes()];
    for (row, &label) in f.labels.iter().enumerate() {
        for j in 0..dims {
            centroids[label][j] += projected[(row, j)];
        }
    }
    for (c, &n) in centroids.iter_mut().zip(counts.iter()) {
        *c /= n as f64;
    }

    Ok(LdaProjection {
        basis,
        eigenvalues,
        centroids,
        class_names: f.class_names.clone(),
    })
}

fn cholesky_with_fallback(within: &DMatrix<f64>, trace_w: f64) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    if let Some(c) = Cholesky::new(within.clone()) {
        return Ok(c);
    }
    let d = within.nrows();
    let ridge = 1e-8 * trace_w / d as f64;
    let regularized = within + DMatrix::identity(d, d) * ridge;
    Cholesky::new(regularized)
        .ok_or_else(|| Error::Numerical("within-class scatter not positive definite".into()))
}

impl LdaProjection {
    pub fn dims(&self) -> usize {
        self.basis.ncols()
    }

    /// Projects a feature vector into discriminant space.
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        self.basis.transpose() * x
    }

    /// Nearest class centroid in projected space; ties break toward the
    /// lowest class index.
    pub fn classify(&self, x: &DVector<f64>) -> usize {
        let p = self.project(x);
        let mut best = (0usize, f64::INFINITY);
        for (i, c) in self.centroids.iter().enumerate() {
            let d = (&p - c).norm_squared();
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::test_support::gaussian_classes;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_class_direction_matches_whitened_mean_difference() {
        let f = gaussian_classes(2, 60, 5, 8.0, 3);
        let model = lda_fit(&f, 2).unwrap();

        let stats = scatter_stats(&f, &[0, 1, 2, 3, 4]).unwrap();
        let delta = &stats.class_means[0] - &stats.class_means[1];
        let analytic = stats
            .within
            .clone()
            .full_piv_lu()
            .solve(&DMatrix::from_column_slice(5, 1, delta.as_slice()))
            .unwrap();
        let analytic = DVector::from_column_slice(analytic.as_slice()).normalize();
        let first = model.basis.column(0).clone_owned().normalize();
        let cos = first.dot(&analytic).abs();
        assert!(cos >= 0.99, "|cos| = {cos}");
    }

    #[test]
    fn white_2d_data_preserves_centroid_ordering() {
        // white within-class noise in 2-D: the projection is linear, so
        // centroid order along the first discriminant matches the order of
        // the raw class means projected on that direction
        let f = gaussian_classes(4, 50, 2, 7.0, 29);
        let model = lda_fit(&f, 2).unwrap();
        let stats = scatter_stats(&f, &[0, 1]).unwrap();
        let w1 = model.basis.column(0);
        for i in 0..4 {
            let projected = stats.class_means[i].dot(&w1.clone_owned());
            assert!((projected - model.centroids[i][0]).abs() < 1e-9);
        }
        let mut by_projection: Vec<usize> = (0..4).collect();
        by_projection.sort_by(|&a, &b| {
            model.centroids[a][0].total_cmp(&model.centroids[b][0])
        });
        let mut by_mean: Vec<usize> = (0..4).collect();
        by_mean.sort_by(|&a, &b| {
            stats.class_means[a]
                .dot(&w1.clone_owned())
                .total_cmp(&stats.class_means[b].dot(&w1.clone_owned()))
        });
        assert_eq!(by_projection, by_mean);
    }

    #[test]
    fn eigenvalues_are_sorted_descending() {
        let f = gaussian_classes(5, 30, 6, 10.0, 11);
        let model = lda_fit(&f, 2).unwrap();
        assert!(model.eigenvalues[0] >= model.eigenvalues[1]);
        assert!(model.eigenvalues[0] > 0.0);
    }

    #[test]
    fn training_centroid_classifies_to_its_class() {
        let f = gaussian_classes(4, 25, 5, 12.0, 17);
        let model = lda_fit(&f, 2).unwrap();
        // reconstruct a feature-space point whose projection is a centroid:
        // use the class mean of the training data
        let stats = scatter_stats(&f, &[0, 1, 2, 3, 4]).unwrap();
        for (class, mean) in stats.class_means.iter().enumerate() {
            assert_eq!(model.classify(mean), class);
        }
    }

    #[test]
    fn twelve_separated_classes_classify_above_95_percent() {
        let train = gaussian_classes(12, 20, 10, 19.3, 5);
        let test = gaussian_classes(12, 20, 10, 19.3, 6);
        let model = lda_fit(&train, 2).unwrap();
        let mut correct = 0usize;
        for row in 0..test.n_samples() {
            let x = DVector::from_fn(test.n_features(), |j, _| test.data[(row, j)]);
            if model.classify(&x) == test.labels[row] {
                correct += 1;
            }
        }
        let accuracy = correct as f64 / test.n_samples() as f64;
        assert!(accuracy >= 0.95, "accuracy {accuracy}");
    }

    #[test]
    fn equidistant_point_takes_the_lower_class_index() {
        let f = gaussian_classes(6, 10, 4, 9.0, 23);
        let mut model = lda_fit(&f, 2).unwrap();
        // force exact centroids for classes 2 and 5, then test their midpoint
        model.centroids[2] = DVector::from_column_slice(&[1.0, 0.0]);
        model.centroids[5] = DVector::from_column_slice(&[-1.0, 0.0]);
        for c in [0usize, 1, 3, 4] {
            model.centroids[c] = DVector::from_column_slice(&[100.0, 100.0]);
        }
        // a feature vector projecting to the origin
        let x = DVector::zeros(4);
        assert_eq!(model.classify(&x), 2);
    }

    #[test]
    fn classification_is_invariant_under_joint_linear_maps() {
        let f = gaussian_classes(4, 30, 5, 10.0, 31);
        let model = lda_fit(&f, 2).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let m = loop {
            let cand = DMatrix::from_fn(5, 5, |_, _| rng.gen_range(-1.0f64..1.0));
            if cand.determinant().abs() > 0.1 {
                break cand;
            }
        };
        let mut mapped = f.clone();
        mapped.data = &f.data * m.transpose();
        let model_mapped = lda_fit(&mapped, 2).unwrap();

        for row in 0..f.n_samples() {
            let x = DVector::from_fn(5, |j, _| f.data[(row, j)]);
            let y = DVector::from_fn(5, |j, _| mapped.data[(row, j)]);
            assert_eq!(model.classify(&x), model_mapped.classify(&y));
        }
    }

    #[test]
    fn needs_at_least_one_dim() {
        let f = gaussian_classes(3, 10, 4, 5.0, 41);
        assert!(lda_fit(&f, 0).is_err());
        assert!(lda_fit(&f, 5).is_err());
    }
}
