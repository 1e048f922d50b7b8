//! Scatter matrices and the dispersion index
//! alpha = tr(S_b * S_w^-1), plus exhaustive feature-pair ranking.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::FeatureMatrix;
use crate::error::{Error, Result};

/// Ridge applied to S_w only when a direct solve fails:
/// S_w + RIDGE * tr(S_w)/d * I.
const RIDGE: f64 = 1e-8;

/// Within/between scatter of a feature subset.
#[derive(Debug, Clone)]
pub struct ScatterStats {
    /// Unnormalized scatter of each class.
    pub per_class: Vec<DMatrix<f64>>,
    /// S_w, the sum of the per-class scatters.
    pub within: DMatrix<f64>,
    /// S_b, count-weighted scatter of the class means.
    pub between: DMatrix<f64>,
    pub class_means: Vec<DVector<f64>>,
    pub global_mean: DVector<f64>,
    pub class_counts: Vec<usize>,
}

/// Scatter matrices over the selected feature columns.
pub fn scatter_stats(f: &FeatureMatrix, subset: &[usize]) -> Result<ScatterStats> {
    if subset.is_empty() {
        return Err(Error::InvalidParameter("empty feature subset".into()));
    }
    for &j in subset {
        if j >= f.n_features() {
            return Err(Error::InvalidParameter(format!("feature index {j} out of range")));
        }
    }
    let d = subset.len();
    let k = f.n_classes();
    let counts = f.class_counts();
    if counts.contains(&0) {
        return Err(Error::InvalidParameter("class with 0 members".into()));
    }

    let mut class_means = vec![DVector::zeros(d); k];
    let mut global_mean = DVector::zeros(d);
    for (row, &label) in f.labels.iter().enumerate() {
        for (jj, &j) in subset.iter().enumerate() {
            class_means[label][jj] += f.data[(row, j)];
            global_mean[jj] += f.data[(row, j)];
        }
    }
    for (mean, &count) in class_means.iter_mut().zip(counts.iter()) {
        *mean /= count as f64;
    }
    global_mean /= f.n_samples() as f64;

    let mut per_class = vec![DMatrix::zeros(d, d); k];
    let mut dev = DVector::zeros(d);
    for (row, &label) in f.labels.iter().enumerate() {
        for (jj, &j) in subset.iter().enumerate() {
            dev[jj] = f.data[(row, j)] - class_means[label][jj];
        }
        let scatter = &mut per_class[label];
        for i in 0..d {
            for j in 0..d {
                scatter[(i, j)] += dev[i] * dev[j];
            }
        }
    }

    let mut within = DMatrix::zeros(d, d);
    for s in &per_class {
        within += s;
    }
    let mut between = DMatrix::zeros(d, d);
    for (mean, &count) in class_means.iter().zip(counts.iter()) {
        let diff = mean - &global_mean;
        between += count as f64 * &diff * diff.transpose();
    }

    Ok(ScatterStats {
        per_class,
        within,
        between,
        class_means,
        global_mean,
        class_counts: counts,
    })
}

/// alpha = tr(S_b * S_w^-1). Solves S_w X = S_b directly; if S_w is
/// singular, retries with ridge regularization.
pub fn alpha(stats: &ScatterStats) -> Result<f64> {
    let trace_w = stats.within.trace();
    if trace_w == 0.0 {
        return Err(Error::Numerical(
            "within-class scatter is identically zero".into(),
        ));
    }
    if let Some(a) = alpha_of(&stats.within, &stats.between) {
        return Ok(a);
    }
    let d = stats.within.nrows();
    let ridge = RIDGE * trace_w / d as f64;
    let regularized = &stats.within + DMatrix::identity(d, d) * ridge;
    alpha_of(&regularized, &stats.between)
        .ok_or_else(|| Error::Numerical("scatter matrix not invertible".into()))
}

fn alpha_of(within: &DMatrix<f64>, between: &DMatrix<f64>) -> Option<f64> {
    let solved = within.clone().full_piv_lu().solve(between)?;
    let a = solved.trace();
    a.is_finite().then_some(a)
}

/// A ranked feature pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAlpha {
    pub feature_a: usize,
    pub feature_b: usize,
    pub alpha: f64,
}

/// Evaluates alpha for every feature pair of an (already standardized)
/// matrix, sorted by descending alpha; ties break toward lower indices.
pub fn rank_pairs(f: &FeatureMatrix) -> Result<Vec<PairAlpha>> {
    let d = f.n_features();
    if d < 2 {
        return Err(Error::InvalidParameter("need at least 2 features".into()));
    }
    // Full scatter once; every 2x2 pair scatter is a submatrix of it.
    let full = scatter_stats(f, &(0..d).collect::<Vec<_>>())?;

    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|a| ((a + 1)..d).map(move |b| (a, b)))
        .collect();
    let mut ranked: Vec<PairAlpha> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let sw = [
                full.within[(a, a)],
                full.within[(a, b)],
                full.within[(b, a)],
                full.within[(b, b)],
            ];
            let sb = [
                full.between[(a, a)],
                full.between[(a, b)],
                full.between[(b, a)],
                full.between[(b, b)],
            ];
            PairAlpha {
                feature_a: a,
                feature_b: b,
                alpha: alpha_2x2(sw, sb),
            }
        })
        .collect();

    ranked.sort_by(|x, y| {
        y.alpha
            .partial_cmp(&x.alpha)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.feature_a.cmp(&y.feature_a))
            .then(x.feature_b.cmp(&y.feature_b))
    });
    Ok(ranked)
}

/// Closed-form tr(S_b * S_w^-1) for 2x2 matrices (row-major [aa, ab, ba, bb]),
/// with the same ridge fallback as `alpha`.
fn alpha_2x2(sw: [f64; 4], sb: [f64; 4]) -> f64 {
    let scale = sw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let det = sw[0] * sw[3] - sw[1] * sw[2];
    let (sw, det) = if det.abs() > 1e-12 * scale * scale {
        (sw, det)
    } else {
        let ridge = RIDGE * (sw[0] + sw[3]) / 2.0;
        let r = [sw[0] + ridge, sw[1], sw[2], sw[3] + ridge];
        let det = r[0] * r[3] - r[1] * r[2];
        (r, det)
    };
    if det == 0.0 {
        return 0.0;
    }
    // tr(S_b * inv(S_w)) with inv = [[d,-b],[-c,a]]/det
    (sb[0] * sw[3] - sb[1] * sw[2] - sb[2] * sw[1] + sb[3] * sw[0]) / det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::test_support::two_cluster_matrix;
    use crate::analysis::{standardize, FeatureMatrix};
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_cluster_scatter_matches_hand_computation() {
        let f = two_cluster_matrix();
        let stats = scatter_stats(&f, &[0, 1]).unwrap();
        assert!((stats.within[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((stats.within[(1, 1)] - 2.0).abs() < 1e-12);
        assert!(stats.within[(0, 1)].abs() < 1e-12);
        assert!((stats.between[(0, 0)] - 200.0).abs() < 1e-12);
        assert!(stats.between[(1, 1)].abs() < 1e-12);
        // S_w = sum of per-class scatters, exactly
        let sum = &stats.per_class[0] + &stats.per_class[1];
        assert_eq!(sum, stats.within);
    }

    #[test]
    fn two_cluster_alpha_is_100() {
        let f = two_cluster_matrix();
        let stats = scatter_stats(&f, &[0, 1]).unwrap();
        let a = alpha(&stats).unwrap();
        assert!((a - 100.0).abs() < 1e-9, "alpha {a}");
    }

    #[test]
    fn single_class_has_zero_between_scatter() {
        let data = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let f = FeatureMatrix::new(data, vec![0, 0, 0], vec!["a".into()]).unwrap();
        let stats = scatter_stats(&f, &[0, 1]).unwrap();
        assert!(stats.between.iter().all(|&v| v.abs() < 1e-12));
        assert!((alpha(&stats).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn duplicating_samples_doubles_both_scatters() {
        let f = two_cluster_matrix();
        let n = f.n_samples();
        let doubled_rows: Vec<usize> = (0..n).chain(0..n).collect();
        let doubled = f.subset_rows(&doubled_rows);
        let s1 = scatter_stats(&f, &[0, 1]).unwrap();
        let s2 = scatter_stats(&doubled, &[0, 1]).unwrap();
        assert!((&s1.within * 2.0 - &s2.within).abs().max() < 1e-9);
        assert!((&s1.between * 2.0 - &s2.between).abs().max() < 1e-9);
    }

    #[test]
    fn halving_mean_offset_quarters_alpha() {
        let f = two_cluster_matrix();
        let mut halved = f.clone();
        // shift class 1 from +10 to +5 along feature 0
        for (row, &label) in f.labels.iter().enumerate() {
            if label == 1 {
                halved.data[(row, 0)] -= 5.0;
            }
        }
        let a_full = alpha(&scatter_stats(&f, &[0, 1]).unwrap()).unwrap();
        let a_half = alpha(&scatter_stats(&halved, &[0, 1]).unwrap()).unwrap();
        assert!((a_full / a_half - 4.0).abs() < 1e-9);
    }

    #[test]
    fn scatter_decomposition_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let data = DMatrix::from_fn(30, 4, |_, _| rng.gen_range(-1.0..1.0));
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let f = FeatureMatrix::new(
            data,
            labels,
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let stats = scatter_stats(&f, &[0, 1, 2, 3]).unwrap();

        let mut total = DMatrix::zeros(4, 4);
        for row in 0..30 {
            let dev = DVector::from_fn(4, |j, _| f.data[(row, j)] - stats.global_mean[j]);
            total += &dev * dev.transpose();
        }
        let lhs = stats.within.trace() + stats.between.trace();
        let rhs = total.trace();
        assert!((lhs - rhs).abs() / rhs.abs() < 1e-6);
    }

    #[test]
    fn alpha_is_affine_invariant_for_well_conditioned_pairs() {
        let f = two_cluster_matrix();
        let base = alpha(&scatter_stats(&f, &[0, 1]).unwrap()).unwrap();
        // invertible affine map of the two features
        let mut mapped = f.clone();
        for row in 0..f.n_samples() {
            let (x, y) = (f.data[(row, 0)], f.data[(row, 1)]);
            mapped.data[(row, 0)] = 2.0 * x - 0.5 * y + 3.0;
            mapped.data[(row, 1)] = 0.7 * x + 1.1 * y - 4.0;
        }
        let a = alpha(&scatter_stats(&mapped, &[0, 1]).unwrap()).unwrap();
        assert!((a - base).abs() / base < 1e-4, "{a} vs {base}");
    }

    #[test]
    fn rank_pairs_finds_the_planted_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (n_per, k, d) = (12usize, 4usize, 10usize);
        let mut data = DMatrix::from_fn(n_per * k, d, |_, _| rng.gen_range(-1.0..1.0));
        for class in 0..k {
            let (sx, sy) = match class {
                0 => (-6.0, -6.0),
                1 => (6.0, -6.0),
                2 => (-6.0, 6.0),
                _ => (6.0, 6.0),
            };
            for s in 0..n_per {
                let row = class * n_per + s;
                data[(row, 3)] += sx;
                data[(row, 7)] += sy;
            }
        }
        let f = FeatureMatrix::new(
            data,
            (0..n_per * k).map(|i| i / n_per).collect(),
            (0..k).map(|c| format!("c{c}")).collect(),
        )
        .unwrap();
        let ranked = rank_pairs(&standardize(&f).matrix).unwrap();
        assert_eq!((ranked[0].feature_a, ranked[0].feature_b), (3, 7));

        // permutation of all pairs, alpha non-increasing
        assert_eq!(ranked.len(), d * (d - 1) / 2);
        for w in ranked.windows(2) {
            assert!(w[0].alpha >= w[1].alpha);
        }
    }

    #[test]
    fn argmax_is_invariant_under_column_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let mut data = DMatrix::from_fn(40, 6, |_, _| rng.gen_range(-1.0..1.0));
        for row in 0..40 {
            if row >= 20 {
                data[(row, 2)] += 5.0;
                data[(row, 4)] += 5.0;
            }
        }
        let labels: Vec<usize> = (0..40).map(|i| i / 20).collect();
        let f = FeatureMatrix::new(data.clone(), labels.clone(), vec!["a".into(), "b".into()])
            .unwrap();
        let top = rank_pairs(&standardize(&f).matrix).unwrap()[0].clone();

        let scales = [3.0, 0.25, 10.0, 0.5, 7.0, 2.0];
        for row in 0..40 {
            for j in 0..6 {
                data[(row, j)] *= scales[j];
            }
        }
        let g = FeatureMatrix::new(data, labels, vec!["a".into(), "b".into()]).unwrap();
        let top_scaled = rank_pairs(&standardize(&g).matrix).unwrap()[0].clone();
        assert_eq!(
            (top.feature_a, top.feature_b),
            (top_scaled.feature_a, top_scaled.feature_b)
        );
    }

    #[test]
    fn zero_within_scatter_is_an_error() {
        let data = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 1.0]);
        let f = FeatureMatrix::new(data, vec![0, 1], vec!["a".into(), "b".into()]).unwrap();
        let stats = scatter_stats(&f, &[0, 1]).unwrap();
        assert!(alpha(&stats).is_err());
    }
}
