//! Gray-level co-occurrence matrices and the eleven Haralick statistics,
//! per adjacency direction.
//!
//! Conventions: distance 1, symmetrized and normalized matrices, 0-based
//! level indices in every sum, logarithms base 2 with 0*log(0) = 0.
//! Degenerate marginals (constant images) define correlation as 0.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Per-pixel offsets (drow, dcol) of the four adjacencies: 0, 45, 90 and
/// 135 degrees.
pub const ADJACENCIES: [(i64, i64); 4] = [(0, 1), (-1, 1), (-1, 0), (-1, -1)];

/// Names of the eleven features, in block order.
pub const HARALICK_NAMES: [&str; 11] = [
    "asm",
    "contrast",
    "correlation",
    "variance",
    "idm",
    "sum_average",
    "sum_variance",
    "sum_entropy",
    "entropy",
    "difference_average",
    "difference_entropy",
];

/// Number of texture features (11 statistics x 4 adjacencies).
pub const HARALICK_FEATURES: usize = 44;

/// Quantizes a [0, 1] channel into `levels` uniform bins.
pub fn quantize(channel: &Array2<f64>, levels: u16) -> Array2<u8> {
    assert!((2..=256).contains(&levels));
    let g = levels as f64;
    channel.mapv(|v| {
        let q = (v * g).floor();
        q.clamp(0.0, g - 1.0) as u8
    })
}

/// Normalized symmetric co-occurrence matrix for one adjacency (1..=4).
pub fn glcm(quantized: &Array2<u8>, levels: u16, adjacency: usize) -> Result<Array2<f64>> {
    if !(2..=256).contains(&levels) {
        return Err(Error::InvalidParameter(format!(
            "glcm levels {levels} out of range 2..=256"
        )));
    }
    if !(1..=4).contains(&adjacency) {
        return Err(Error::InvalidParameter(format!(
            "glcm adjacency {adjacency} out of range 1..=4"
        )));
    }
    let (dr, dc) = ADJACENCIES[adjacency - 1];
    let (h, w) = quantized.dim();
    let g = levels as usize;
    let mut counts = Array2::<f64>::zeros((g, g));
    let mut total = 0.0f64;
    for r in 0..h {
        for c in 0..w {
            let (rr, cc) = (r as i64 + dr, c as i64 + dc);
            if rr < 0 || rr >= h as i64 || cc < 0 || cc >= w as i64 {
                continue;
            }
            let i = quantized[(r, c)] as usize;
            let j = quantized[(rr as usize, cc as usize)] as usize;
            counts[(i, j)] += 1.0;
            counts[(j, i)] += 1.0;
            total += 2.0;
        }
    }
    if total == 0.0 {
        return Err(Error::InvalidParameter(
            "image too small for the requested adjacency".into(),
        ));
    }
    counts.mapv_inplace(|v| v / total);
    Ok(counts)
}

fn log2_or_zero(p: f64) -> f64 {
    if p > 0.0 {
        p.log2()
    } else {
        0.0
    }
}

/// The eleven Haralick statistics of a normalized symmetric GLCM, in
/// `HARALICK_NAMES` order.
pub fn haralick_from_glcm(p: &Array2<f64>) -> [f64; 11] {
    let g = p.nrows();

    let mut p_x = vec![0.0f64; g];
    for i in 0..g {
        for j in 0..g {
            p_x[i] += p[(i, j)];
        }
    }
    let mu_x: f64 = p_x.iter().enumerate().map(|(i, &v)| i as f64 * v).sum();
    let var_x: f64 = p_x
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 - mu_x).powi(2) * v)
        .sum();
    let sd_x = var_x.sqrt();

    let mut p_sum = vec![0.0f64; 2 * g - 1];
    let mut p_diff = vec![0.0f64; g];
    let mut asm = 0.0;
    let mut contrast = 0.0;
    let mut idm = 0.0;
    let mut entropy = 0.0;
    let mut corr_num = 0.0;
    let mut variance = 0.0;
    for i in 0..g {
        for j in 0..g {
            let v = p[(i, j)];
            if v == 0.0 {
                continue;
            }
            let d = i as f64 - j as f64;
            asm += v * v;
            contrast += d * d * v;
            idm += v / (1.0 + d * d);
            entropy -= v * log2_or_zero(v);
            corr_num += (i as f64 - mu_x) * (j as f64 - mu_x) * v;
            variance += (i as f64 - mu_x).powi(2) * v;
            p_sum[i + j] += v;
            p_diff[i.abs_diff(j)] += v;
        }
    }
    // symmetric matrix: sd_x * sd_y == var_x
    let correlation = if sd_x > 1e-12 { corr_num / var_x } else { 0.0 };

    let sum_average: f64 = p_sum.iter().enumerate().map(|(k, &v)| k as f64 * v).sum();
    let sum_variance: f64 = p_sum
        .iter()
        .enumerate()
        .map(|(k, &v)| (k as f64 - sum_average).powi(2) * v)
        .sum();
    let sum_entropy: f64 = -p_sum.iter().map(|&v| v * log2_or_zero(v)).sum::<f64>();
    let difference_average: f64 = p_diff.iter().enumerate().map(|(k, &v)| k as f64 * v).sum();
    let difference_entropy: f64 = -p_diff.iter().map(|&v| v * log2_or_zero(v)).sum::<f64>();

    [
        asm,
        contrast,
        correlation,
        variance,
        idm,
        sum_average,
        sum_variance,
        sum_entropy,
        entropy,
        difference_average,
        difference_entropy,
    ]
}

/// All 44 texture features in schema order: statistic-major, adjacency-minor.
pub fn haralick_block(quantized: &Array2<u8>, levels: u16) -> Result<[f64; HARALICK_FEATURES]> {
    let mut out = [0.0; HARALICK_FEATURES];
    for adj in 1..=4 {
        let matrix = glcm(quantized, levels, adj)?;
        let feats = haralick_from_glcm(&matrix);
        for (f, &v) in feats.iter().enumerate() {
            out[f * 4 + (adj - 1)] = v;
        }
    }
    Ok(out)
}

/// Brute-force re-computation of all eleven statistics straight from the
/// definition sums, with no shared marginals. Test oracle; kept in the
/// library so both unit and acceptance suites can use it.
pub fn haralick_brute_force(p: &Array2<f64>) -> [f64; 11] {
    let g = p.nrows();
    let idx = |i: usize| i as f64;

    let mut mu = 0.0;
    for i in 0..g {
        for j in 0..g {
            mu += idx(i) * p[(i, j)];
        }
    }
    let mut var = 0.0;
    for i in 0..g {
        for j in 0..g {
            var += (idx(i) - mu).powi(2) * p[(i, j)];
        }
    }

    let mut asm = 0.0;
    let mut contrast = 0.0;
    let mut correlation = 0.0;
    let mut variance = 0.0;
    let mut idm = 0.0;
    let mut entropy = 0.0;
    for i in 0..g {
        for j in 0..g {
            let v = p[(i, j)];
            asm += v * v;
            contrast += (idx(i) - idx(j)).powi(2) * v;
            if var.sqrt() > 1e-12 {
                correlation += (idx(i) - mu) * (idx(j) - mu) * v / var;
            }
            variance += (idx(i) - mu).powi(2) * v;
            idm += v / (1.0 + (idx(i) - idx(j)).powi(2));
            if v > 0.0 {
                entropy -= v * v.log2();
            }
        }
    }

    let mut sum_average = 0.0;
    for k in 0..=(2 * g - 2) {
        let mut pk = 0.0;
        for i in 0..g {
            for j in 0..g {
                if i + j == k {
                    pk += p[(i, j)];
                }
            }
        }
        sum_average += idx(k) * pk;
    }
    let mut sum_variance = 0.0;
    let mut sum_entropy = 0.0;
    for k in 0..=(2 * g - 2) {
        let mut pk = 0.0;
        for i in 0..g {
            for j in 0..g {
                if i + j == k {
                    pk += p[(i, j)];
                }
            }
        }
        sum_variance += (idx(k) - sum_average).powi(2) * pk;
        if pk > 0.0 {
            sum_entropy -= pk * pk.log2();
        }
    }
    let mut difference_average = 0.0;
    let mut difference_entropy = 0.0;
    for k in 0..g {
        let mut pk = 0.0;
        for i in 0..g {
            for j in 0..g {
                if i.abs_diff(j) == k {
                    pk += p[(i, j)];
                }
            }
        }
        difference_average += idx(k) * pk;
        if pk > 0.0 {
            difference_entropy -= pk * pk.log2();
        }
    }

    [
        asm,
        contrast,
        correlation,
        variance,
        idm,
        sum_average,
        sum_variance,
        sum_entropy,
        entropy,
        difference_average,
        difference_entropy,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_quantized(seed: u64, h: usize, w: usize, levels: u16) -> Array2<u8> {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        Array2::from_shape_fn((h, w), |_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) % levels as u64) as u8
        })
    }

    #[test]
    fn constant_image_is_a_single_diagonal_entry() {
        let img = Array2::from_elem((8, 8), 3u8);
        let m = glcm(&img, 8, 1).unwrap();
        assert_eq!(m[(3, 3)], 1.0);
        assert!((m.sum() - 1.0).abs() < 1e-12);

        let feats = haralick_block(&img, 8).unwrap();
        for adj in 0..4 {
            assert_eq!(feats[adj], 1.0, "asm");
            assert_eq!(feats[4 + adj], 0.0, "contrast");
            assert_eq!(feats[8 * 4 + adj], 0.0, "entropy");
            assert_eq!(feats[2 * 4 + adj], 0.0, "correlation degenerate");
        }
    }

    #[test]
    fn checkerboard_glcm_and_contrast() {
        let img = Array2::from_shape_fn((4, 4), |(r, c)| ((r + c) % 2) as u8);
        let m = glcm(&img, 2, 1).unwrap();
        assert_eq!(m[(0, 1)], 0.5);
        assert_eq!(m[(1, 0)], 0.5);
        assert_eq!(m[(0, 0)], 0.0);
        assert_eq!(m[(1, 1)], 0.0);
        let feats = haralick_from_glcm(&m);
        assert!((feats[1] - 1.0).abs() < 1e-12, "contrast");
    }

    #[test]
    fn glcm_is_symmetric() {
        let img = random_quantized(7, 12, 9, 6);
        for adj in 1..=4 {
            let m = glcm(&img, 6, adj).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    assert_eq!(m[(i, j)], m[(j, i)]);
                }
            }
            assert!((m.sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn block_matches_brute_force_oracle() {
        for seed in 0..10u64 {
            let img = random_quantized(seed, 8, 8, 8);
            let block = haralick_block(&img, 8).unwrap();
            for adj in 1..=4 {
                let m = glcm(&img, 8, adj).unwrap();
                let oracle = haralick_brute_force(&m);
                for f in 0..11 {
                    let fast = block[f * 4 + (adj - 1)];
                    assert!(
                        (fast - oracle[f]).abs() <= 1e-12,
                        "seed {seed} adj {adj} {}: {fast} vs {}",
                        HARALICK_NAMES[f],
                        oracle[f]
                    );
                }
            }
        }
    }

    #[test]
    fn feature_ranges_hold_on_random_inputs() {
        for seed in 0..20u64 {
            let img = random_quantized(seed * 13 + 1, 10, 10, 16);
            let block = haralick_block(&img, 16).unwrap();
            for adj in 0..4 {
                let asm = block[adj];
                let contrast = block[4 + adj];
                let corr = block[2 * 4 + adj];
                let entropy = block[8 * 4 + adj];
                assert!(asm > 0.0 && asm <= 1.0);
                assert!(contrast >= 0.0);
                assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&corr));
                assert!(entropy >= 0.0);
            }
        }
    }

    #[test]
    fn symmetric_features_survive_gray_complement() {
        let levels = 16u16;
        let img = random_quantized(3, 12, 12, levels);
        let flipped = img.mapv(|v| (levels as u8 - 1) - v);
        let a = haralick_block(&img, levels).unwrap();
        let b = haralick_block(&flipped, levels).unwrap();
        for f in [0usize, 1, 4, 8] {
            // asm, contrast, idm, entropy
            for adj in 0..4 {
                assert!(
                    (a[f * 4 + adj] - b[f * 4 + adj]).abs() < 1e-12,
                    "{} adj {adj}",
                    HARALICK_NAMES[f]
                );
            }
        }
    }

    #[test]
    fn quantize_maps_unit_interval_to_levels() {
        let ch = Array2::from_shape_vec((1, 5), vec![0.0, 0.25, 0.5, 0.99, 1.0]).unwrap();
        let q = quantize(&ch, 64);
        assert_eq!(q[(0, 0)], 0);
        assert_eq!(q[(0, 1)], 16);
        assert_eq!(q[(0, 2)], 32);
        assert_eq!(q[(0, 3)], 63);
        assert_eq!(q[(0, 4)], 63);
    }

    #[test]
    fn invalid_levels_are_rejected() {
        let img = Array2::from_elem((4, 4), 0u8);
        assert!(glcm(&img, 1, 1).is_err());
        assert!(glcm(&img, 2, 0).is_err());
        assert!(glcm(&img, 2, 5).is_err());
    }
}
