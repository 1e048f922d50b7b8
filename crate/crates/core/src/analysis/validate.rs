//! Repeated random-split validation of the discriminant classifier.
//!
//! Each repetition shuffles every class with its own ChaCha8 stream
//! (stream = repetition index, seed = the run seed), splits 50/50, fits on
//! the training half and classifies the held-out half. Counts accumulate in
//! integers, so the mean matrix is exactly reproducible for a given seed.

use nalgebra::{DMatrix, DVector};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{lda_fit, FeatureMatrix};
use crate::error::{Error, Result};

/// Mean confusion counts over the repetitions. Rows are true classes,
/// columns predicted classes; each row sums to that class's held-out size.
#[derive(Debug, Clone)]
pub struct ConfusionMatrix {
    pub mean_counts: DMatrix<f64>,
    pub repetitions: usize,
    pub seed: u64,
    pub class_names: Vec<String>,
}

impl ConfusionMatrix {
    pub fn mean_diagonal(&self) -> f64 {
        let k = self.mean_counts.nrows();
        (0..k).map(|i| self.mean_counts[(i, i)]).sum::<f64>() / k as f64
    }

    /// Overall accuracy: correct / total over the held-out sets.
    pub fn accuracy(&self) -> f64 {
        let diag: f64 = (0..self.mean_counts.nrows())
            .map(|i| self.mean_counts[(i, i)])
            .sum();
        diag / self.mean_counts.sum()
    }
}

/// In-place Fisher-Yates shuffle. Bounded sampling uses the widening
/// multiplication of the 64-bit generator output, so the index sequence is
/// a pure function of the generator stream.
pub fn fisher_yates<T>(values: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..values.len()).rev() {
        let j = bounded(rng.next_u64(), (i + 1) as u64) as usize;
        values.swap(i, j);
    }
}

fn bounded(x: u64, n: u64) -> u64 {
    ((x as u128 * n as u128) >> 64) as u64
}

/// Runs `repetitions` random 50/50 splits and returns the mean confusion
/// matrix. Classes need at least 2 samples; odd classes put the extra
/// sample in the test half.
pub fn cross_validate(
    f: &FeatureMatrix,
    repetitions: usize,
    seed: u64,
) -> Result<ConfusionMatrix> {
    let k = f.n_classes();
    if repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
    }
    let counts = f.class_counts();
    if let Some(small) = counts.iter().position(|&c| c < 2) {
        return Err(Error::InvalidParameter(format!(
            "class {:?} has fewer than 2 samples",
            f.class_names[small]
        )));
    }

    let mut class_rows: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (row, &label) in f.labels.iter().enumerate() {
        class_rows[label].push(row);
    }

    let totals: Vec<DMatrix<u64>> = (0..repetitions)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(rep as u64 + 1);
            split_and_score(f, &class_rows, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sum = DMatrix::<u64>::zeros(k, k);
    for t in &totals {
        sum += t;
    }
    let mean_counts = DMatrix::from_fn(k, k, |i, j| sum[(i, j)] as f64 / repetitions as f64);
    Ok(ConfusionMatrix {
        mean_counts,
        repetitions,
        seed,
        class_names: f.class_names.clone(),
    })
}

fn split_and_score(
    f: &FeatureMatrix,
    class_rows: &[Vec<usize>],
    rng: &mut ChaCha8Rng,
) -> Result<DMatrix<u64>> {
    let k = class_rows.len();
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for rows in class_rows {
        let mut shuffled = rows.clone();
        fisher_yates(&mut shuffled, rng);
        let n_train = shuffled.len() / 2;
        train_rows.extend_from_slice(&shuffled[..n_train]);
        test_rows.extend_from_slice(&shuffled[n_train..]);
    }

    let train = f.subset_rows(&train_rows);
    let model = lda_fit(&train, 2.min(f.n_features()))?;

    let mut counts = DMatrix::<u64>::zeros(k, k);
    for &row in &test_rows {
        let x = DVector::from_fn(f.n_features(), |j, _| f.data[(row, j)]);
        let predicted = model.classify(&x);
        counts[(f.labels[row], predicted)] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::test_support::gaussian_classes;

    #[test]
    fn rows_sum_to_held_out_size() {
        let f = gaussian_classes(4, 20, 6, 10.0, 3);
        let cm = cross_validate(&f, 25, 99).unwrap();
        for i in 0..4 {
            let row_sum: f64 = (0..4).map(|j| cm.mean_counts[(i, j)]).sum();
            assert!((row_sum - 10.0).abs() < 1e-9, "row {i} sums to {row_sum}");
        }
    }

    #[test]
    fn identical_seeds_give_identical_matrices() {
        let f = gaussian_classes(3, 14, 5, 8.0, 7);
        let a = cross_validate(&f, 10, 1234).unwrap();
        let b = cross_validate(&f, 10, 1234).unwrap();
        assert_eq!(a.mean_counts, b.mean_counts);

        // overlapping classes so different splits actually disagree
        let hard = gaussian_classes(3, 14, 5, 1.0, 7);
        let c = cross_validate(&hard, 10, 1234).unwrap();
        let d = cross_validate(&hard, 10, 1235).unwrap();
        assert!(c.mean_counts != d.mean_counts);
    }

    #[test]
    fn separated_12_class_benchmark_has_strong_diagonal() {
        let f = gaussian_classes(12, 20, 10, 19.3, 42);
        let cm = cross_validate(&f, 100, 7).unwrap();
        for i in 0..12 {
            let row_sum: f64 = (0..12).map(|j| cm.mean_counts[(i, j)]).sum();
            assert!((row_sum - 10.0).abs() < 1e-9);
        }
        assert!(cm.mean_diagonal() >= 9.5, "diagonal {}", cm.mean_diagonal());
    }

    #[test]
    fn tiny_classes_are_rejected() {
        let f = gaussian_classes(3, 10, 4, 8.0, 5);
        // keep only one sample of class 2
        let small = f.subset_rows(&(0..21).collect::<Vec<_>>());
        assert!(cross_validate(&small, 5, 1).is_err());
    }

    #[test]
    fn odd_class_sizes_split_floor_train() {
        let f = gaussian_classes(3, 9, 4, 10.0, 13);
        let cm = cross_validate(&f, 8, 3).unwrap();
        for i in 0..3 {
            let row_sum: f64 = (0..3).map(|j| cm.mean_counts[(i, j)]).sum();
            assert!((row_sum - 5.0).abs() < 1e-9); // 4 train, 5 test
        }
    }

    #[test]
    fn fisher_yates_is_deterministic_and_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut a: Vec<usize> = (0..50).collect();
        fisher_yates(&mut a, &mut rng);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut b: Vec<usize> = (0..50).collect();
        fisher_yates(&mut b, &mut rng);
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
    }
}
