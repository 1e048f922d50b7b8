//! Contour curvature from Fourier-domain derivatives, curvature peak
//! detection, and the per-painting curvature features.
//!
//! Contours are resampled to a power-of-two number of uniform arc-length
//! samples. Derivatives come from the spectral identity (multiply the
//! transform by 2*pi*i*k/T), after Gaussian low-pass smoothing of the
//! spectrum; raster contours carry pixel jitter that second derivatives
//! would otherwise amplify.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::segmentation::ContourPoint;

/// Number of curvature features.
pub const CURVATURE_FEATURES: usize = 5;

/// Default threshold factor for peak detection.
pub const DEFAULT_GAMMA: f64 = 1.5;

/// Default spectral smoothing width as a fraction of the sample count.
pub const DEFAULT_SIGMA_FACTOR: f64 = 0.02;

/// Contours shorter than this many traced pixels are skipped: too short for
/// stable spectral derivatives.
pub const MIN_CONTOUR_POINTS: usize = 64;

const T_MIN: usize = 64;
const T_MAX: usize = 4096;

/// A closed curve resampled to `len()` uniform arc-length samples.
#[derive(Debug, Clone)]
pub struct ParametricContour {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ParametricContour {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn point(&self, i: usize) -> (f64, f64) {
        (self.x[i], self.y[i])
    }
}

/// Power-of-two sample count for a contour of the given perimeter,
/// clamped to `[64, 4096]`.
pub fn sample_count(perimeter: f64) -> usize {
    let raw = perimeter.max(1.0).log2().ceil() as u32;
    (1usize << raw).clamp(T_MIN, T_MAX)
}

/// Resamples a closed pixel path to `t` uniform arc-length positions
/// (linear interpolation along the closed polyline).
pub fn resample_contour(path: &[ContourPoint], t: usize) -> Result<ParametricContour> {
    if path.len() < 3 {
        return Err(Error::InvalidParameter(
            "contour needs at least 3 points".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = path.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    let n = pts.len();
    let mut cumulative = Vec::with_capacity(n + 1);
    cumulative.push(0.0);
    for i in 0..n {
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[(i + 1) % n];
        let seg = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
        cumulative.push(cumulative[i] + seg);
    }
    let total = *cumulative.last().expect("non-empty");
    if total <= 0.0 {
        return Err(Error::InvalidParameter("degenerate contour".into()));
    }

    let mut x = Vec::with_capacity(t);
    let mut y = Vec::with_capacity(t);
    let mut seg_idx = 0usize;
    for i in 0..t {
        let s = total * i as f64 / t as f64;
        while seg_idx + 1 < cumulative.len() && cumulative[seg_idx + 1] < s {
            seg_idx += 1;
        }
        let s0 = cumulative[seg_idx];
        let s1 = cumulative[seg_idx + 1];
        let alpha = if s1 > s0 { (s - s0) / (s1 - s0) } else { 0.0 };
        let (x0, y0) = pts[seg_idx % n];
        let (x1, y1) = pts[(seg_idx + 1) % n];
        x.push(x0 + alpha * (x1 - x0));
        y.push(y0 + alpha * (y1 - y0));
    }
    Ok(ParametricContour { x, y })
}

/// First and second derivatives of the contour coordinates with respect to
/// the sample index.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
    pub ddx: Vec<f64>,
    pub ddy: Vec<f64>,
}

/// Spectral derivatives of a closed contour. `smoothing_sigma`, when given,
/// multiplies the spectrum by a Gaussian of that width (in frequency bins)
/// before differentiating.
pub fn fourier_derivatives(
    contour: &ParametricContour,
    smoothing_sigma: Option<f64>,
) -> Result<Derivatives> {
    let t = contour.len();
    if t < 8 {
        return Err(Error::InvalidParameter(
            "contour too short for spectral derivatives".into(),
        ));
    }
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(t);
    let inverse = planner.plan_fft_inverse(t);

    let spectrum = |values: &[f64]| -> Vec<Complex<f64>> {
        let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        forward.process(&mut buf);
        if let Some(sigma) = smoothing_sigma {
            for (k, z) in buf.iter_mut().enumerate() {
                let f = signed_frequency(k, t);
                *z *= (-(f * f) / (2.0 * sigma * sigma)).exp();
            }
        }
        buf
    };

    let differentiate = |spec: &[Complex<f64>], order: u32| -> Vec<f64> {
        let mut buf: Vec<Complex<f64>> = spec
            .iter()
            .enumerate()
            .map(|(k, &z)| {
                let f = signed_frequency(k, t);
                // Nyquist bin of the odd derivative has no consistent sign
                if order == 1 && t.is_multiple_of(2) && k == t / 2 {
                    return Complex::new(0.0, 0.0);
                }
                let w = 2.0 * std::f64::consts::PI * f / t as f64;
                match order {
                    1 => z * Complex::new(0.0, w),
                    _ => z * Complex::new(-(w * w), 0.0),
                }
            })
            .collect();
        inverse.process(&mut buf);
        buf.iter().map(|z| z.re / t as f64).collect()
    };

    let sx = spectrum(&contour.x);
    let sy = spectrum(&contour.y);
    Ok(Derivatives {
        dx: differentiate(&sx, 1),
        dy: differentiate(&sy, 1),
        ddx: differentiate(&sx, 2),
        ddy: differentiate(&sy, 2),
    })
}

fn signed_frequency(k: usize, t: usize) -> f64 {
    if k <= t / 2 {
        k as f64
    } else {
        k as f64 - t as f64
    }
}

/// Curvature per sample plus the peak threshold.
#[derive(Debug, Clone)]
pub struct CurvatureSeries {
    pub k: Vec<f64>,
    /// Peak threshold, `median(|k|) * gamma`.
    pub tau: f64,
    pub gamma: f64,
}

/// Curvature k = (x'y'' - y'x'') / (x'^2 + y'^2)^(3/2), denominator floored
/// at 1e-12.
pub fn curvature_series(
    contour: &ParametricContour,
    smoothing_sigma: Option<f64>,
    gamma: f64,
) -> Result<CurvatureSeries> {
    let d = fourier_derivatives(contour, smoothing_sigma)?;
    let k: Vec<f64> = (0..contour.len())
        .map(|i| {
            let speed_sq = d.dx[i] * d.dx[i] + d.dy[i] * d.dy[i];
            let denom = speed_sq.powf(1.5).max(1e-12);
            (d.dx[i] * d.ddy[i] - d.dy[i] * d.ddx[i]) / denom
        })
        .collect();
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite curvature".into()));
    }
    let mut abs: Vec<f64> = k.iter().map(|v| v.abs()).collect();
    abs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let median = if abs.is_empty() {
        0.0
    } else if abs.len() % 2 == 1 {
        abs[abs.len() / 2]
    } else {
        (abs[abs.len() / 2 - 1] + abs[abs.len() / 2]) / 2.0
    };
    Ok(CurvatureSeries {
        k,
        tau: median * gamma,
        gamma,
    })
}

/// Peak positions and the gaps between consecutive peaks (cyclic).
#[derive(Debug, Clone, Default)]
pub struct PeakSet {
    pub indices: Vec<usize>,
    /// Euclidean distance between consecutive peak points.
    pub geometric_gaps: Vec<f64>,
    /// Arc-length index distance between consecutive peaks.
    pub pixel_gaps: Vec<f64>,
}

/// Strict cyclic local maxima of the curvature exceeding the threshold.
///
/// On exactly-straight contours the median (and so the threshold) collapses
/// to zero; maxima at the floating-point noise floor (< 1e-9 of the series
/// maximum) are never reported.
pub fn detect_peaks(series: &CurvatureSeries, contour: &ParametricContour) -> PeakSet {
    let t = series.k.len();
    debug_assert_eq!(t, contour.len());
    if t < 3 {
        return PeakSet::default();
    }
    let noise_floor = 1e-9
        * series
            .k
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let threshold = series.tau.max(noise_floor);
    let mut indices = Vec::new();
    for i in 0..t {
        let prev = series.k[(i + t - 1) % t];
        let next = series.k[(i + 1) % t];
        let k = series.k[i];
        if k > prev && k > next && k > threshold {
            indices.push(i);
        }
    }
    let mut geometric_gaps = Vec::new();
    let mut pixel_gaps = Vec::new();
    if indices.len() >= 2 {
        for w in 0..indices.len() {
            let a = indices[w];
            let b = indices[(w + 1) % indices.len()];
            let (xa, ya) = contour.point(a);
            let (xb, yb) = contour.point(b);
            geometric_gaps.push(((xb - xa).powi(2) + (yb - ya).powi(2)).sqrt());
            let forward = (b + t - a) % t;
            pixel_gaps.push(forward as f64);
        }
    }
    PeakSet {
        indices,
        geometric_gaps,
        pixel_gaps,
    }
}

/// Per-painting curvature features in schema order:
/// geometric gap mean, pixel gap mean, geometric gap sd, pixel gap sd,
/// mean peak count.
pub fn curvature_block(peak_sets: &[PeakSet]) -> [f64; CURVATURE_FEATURES] {
    let mut geo: Vec<f64> = Vec::new();
    let mut pix: Vec<f64> = Vec::new();
    for p in peak_sets {
        geo.extend_from_slice(&p.geometric_gaps);
        pix.extend_from_slice(&p.pixel_gaps);
    }
    let total_peaks: usize = peak_sets.iter().map(|p| p.indices.len()).sum();
    let peak_count_mean = if peak_sets.is_empty() {
        0.0
    } else {
        total_peaks as f64 / peak_sets.len() as f64
    };
    [
        mean_or_zero(&geo),
        mean_or_zero(&pix),
        std_or_zero(&geo),
        std_or_zero(&pix),
        peak_count_mean,
    ]
}

fn mean_or_zero(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn std_or_zero(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let m = mean_or_zero(v);
    (v.iter().map(|&x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::trace_contour;
    use ndarray::Array2;
    use std::f64::consts::TAU;

    fn analytic_circle(radius: f64, t: usize) -> ParametricContour {
        let x = (0..t).map(|i| radius * (TAU * i as f64 / t as f64).cos()).collect();
        let y = (0..t).map(|i| radius * (TAU * i as f64 / t as f64).sin()).collect();
        ParametricContour { x, y }
    }

    fn rasterized_disk(radius: i64) -> Vec<ContourPoint> {
        let side = (2 * radius + 6) as usize;
        let center = radius + 3;
        let mask = Array2::from_shape_fn((side, side), |(r, c)| {
            let (dr, dc) = (r as i64 - center, c as i64 - center);
            dr * dr + dc * dc <= radius * radius
        });
        trace_contour(&mask).unwrap()
    }

    fn band_limited_curve(seed: u64, t: usize, harmonics: usize) -> ParametricContour {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(7);
        let mut rand = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut x = vec![0.0; t];
        let mut y = vec![0.0; t];
        for i in 0..t {
            let th = TAU * i as f64 / t as f64;
            x[i] = 100.0 * th.cos();
            y[i] = 100.0 * th.sin();
        }
        for m in 2..=harmonics {
            let (ax, bx, ay, by) = (rand(), rand(), rand(), rand());
            let amp = 10.0 / (m * m) as f64;
            for i in 0..t {
                let th = TAU * (m * i) as f64 / t as f64;
                x[i] += amp * (ax * th.cos() + bx * th.sin());
                y[i] += amp * (ay * th.cos() + by * th.sin());
            }
        }
        ParametricContour { x, y }
    }

    #[test]
    fn circle_speed_is_constant() {
        let c = analytic_circle(40.0, 256);
        let d = fourier_derivatives(&c, None).unwrap();
        let speeds: Vec<f64> = (0..256)
            .map(|i| (d.dx[i] * d.dx[i] + d.dy[i] * d.dy[i]).sqrt())
            .collect();
        let m = speeds.iter().sum::<f64>() / 256.0;
        for s in speeds {
            assert!((s - m).abs() / m < 1e-6);
        }
    }

    #[test]
    fn derivative_kills_dc() {
        let c = band_limited_curve(5, 512, 5);
        let d = fourier_derivatives(&c, None).unwrap();
        let mean_dx: f64 = d.dx.iter().sum::<f64>() / 512.0;
        let mean_dy: f64 = d.dy.iter().sum::<f64>() / 512.0;
        assert!(mean_dx.abs() < 1e-9);
        assert!(mean_dy.abs() < 1e-9);
    }

    #[test]
    fn derivatives_match_central_differences() {
        let c = band_limited_curve(11, 512, 5);
        let d = fourier_derivatives(&c, None).unwrap();
        let t = c.len();
        let mut err = 0.0;
        let mut norm = 0.0;
        for i in 0..t {
            let fd = (c.x[(i + 1) % t] - c.x[(i + t - 1) % t]) / 2.0;
            err += (d.dx[i] - fd).powi(2);
            norm += d.dx[i].powi(2);
        }
        let rel = (err / norm).sqrt();
        assert!(rel < 1e-3, "relative RMS {rel}");
    }

    #[test]
    fn rasterized_circle_mean_curvature() {
        let path = rasterized_disk(50);
        let t = sample_count(crate::segmentation::contour_length(&path));
        assert_eq!(t, 512);
        let contour = resample_contour(&path, t).unwrap();
        let series = curvature_series(&contour, Some(DEFAULT_SIGMA_FACTOR * t as f64), 1.5).unwrap();
        let mean_k = series.k.iter().sum::<f64>() / t as f64;
        assert!(
            (mean_k - 0.02).abs() / 0.02 < 0.05,
            "mean curvature {mean_k}"
        );
    }

    #[test]
    fn ellipse_vertex_curvatures() {
        // dense analytic sampling, then uniform arc-length resampling
        let (a, b) = (100.0, 50.0);
        let dense: Vec<ContourPoint> = (0..4096)
            .map(|i| {
                let th = TAU * i as f64 / 4096.0;
                (
                    (a * th.cos() * 1000.0).round() as i64,
                    (b * th.sin() * 1000.0).round() as i64,
                )
            })
            .collect();
        // scale down to float coordinates via ParametricContour directly
        let contour = resample_contour(&dense, 512).unwrap();
        let contour = ParametricContour {
            x: contour.x.iter().map(|v| v / 1000.0).collect(),
            y: contour.y.iter().map(|v| v / 1000.0).collect(),
        };
        let series = curvature_series(&contour, Some(0.02 * 512.0), 1.5).unwrap();
        let kmax = series.k.iter().map(|v| v.abs()).fold(f64::MIN, f64::max);
        let kmin = series.k.iter().map(|v| v.abs()).fold(f64::MAX, f64::min);
        let expect_max = a / (b * b);
        let expect_min = b / (a * a);
        assert!(
            (kmax - expect_max).abs() / expect_max < 0.10,
            "max {kmax} vs {expect_max}"
        );
        assert!(
            (kmin - expect_min).abs() / expect_min < 0.10,
            "min {kmin} vs {expect_min}"
        );
    }

    #[test]
    fn stadium_straight_runs_are_flat() {
        let mut mask = Array2::from_elem((200, 400), false);
        for r in 0..200usize {
            for c in 0..400usize {
                let in_rect = (60..140).contains(&r) && (100..300).contains(&c);
                let in_left = (r as i64 - 100).pow(2) + (c as i64 - 100).pow(2) <= 1600;
                let in_right = (r as i64 - 100).pow(2) + (c as i64 - 300).pow(2) <= 1600;
                mask[(r, c)] = in_rect || in_left || in_right;
            }
        }
        let path = trace_contour(&mask).unwrap();
        let t = sample_count(crate::segmentation::contour_length(&path));
        let contour = resample_contour(&path, t).unwrap();
        let series = curvature_series(&contour, Some(0.02 * t as f64), 1.5).unwrap();
        for i in 0..t {
            let (x, y) = contour.point(i);
            let on_straight =
                (140.0..260.0).contains(&x) && ((y - 60.0).abs() < 1.5 || (y - 139.0).abs() < 1.5);
            if on_straight {
                assert!(series.k[i].abs() <= 1e-3, "k={} at ({x},{y})", series.k[i]);
            }
        }
    }

    #[test]
    fn orientation_flip_negates_curvature() {
        let c = band_limited_curve(3, 256, 4);
        let flipped = ParametricContour {
            x: c.x.iter().rev().cloned().collect(),
            y: c.y.iter().rev().cloned().collect(),
        };
        let a = curvature_series(&c, Some(0.02 * 256.0), 1.5).unwrap();
        let b = curvature_series(&flipped, Some(0.02 * 256.0), 1.5).unwrap();
        // sample i of the flipped contour is sample T-1-i of the original
        for i in 0..256 {
            let v = b.k[255 - i];
            assert!(
                (a.k[i] + v).abs() < 1e-9,
                "k[{i}]={} flipped {}",
                a.k[i],
                v
            );
        }
    }

    #[test]
    fn curvature_scales_inversely_with_size() {
        let c = band_limited_curve(9, 256, 4);
        let base = curvature_series(&c, Some(0.02 * 256.0), 1.5).unwrap();
        for s in [0.5, 2.0] {
            let scaled = ParametricContour {
                x: c.x.iter().map(|v| v * s).collect(),
                y: c.y.iter().map(|v| v * s).collect(),
            };
            let ks = curvature_series(&scaled, Some(0.02 * 256.0), 1.5).unwrap();
            for i in 0..256 {
                let rel = (ks.k[i] * s - base.k[i]).abs() / base.k[i].abs().max(1e-9);
                assert!(rel < 0.02, "i={i} rel={rel}");
            }
        }
    }

    #[test]
    fn total_turning_is_two_pi() {
        let c = band_limited_curve(21, 512, 5);
        let series = curvature_series(&c, Some(0.02 * 512.0), 1.5).unwrap();
        let d = fourier_derivatives(&c, Some(0.02 * 512.0)).unwrap();
        let turning: f64 = (0..512)
            .map(|i| series.k[i] * (d.dx[i].powi(2) + d.dy[i].powi(2)).sqrt())
            .sum();
        assert!(
            (turning - TAU).abs() / TAU < 0.05,
            "total turning {turning}"
        );
    }

    #[test]
    fn constant_series_has_no_peaks() {
        let contour = analytic_circle(10.0, 64);
        let series = CurvatureSeries {
            k: vec![0.5; 64],
            tau: 0.75,
            gamma: 1.5,
        };
        let peaks = detect_peaks(&series, &contour);
        assert!(peaks.indices.is_empty());
    }

    #[test]
    fn impulses_are_detected() {
        let contour = analytic_circle(10.0, 64);
        let mut k = vec![0.1f64; 64];
        k[10] = 10.0;
        k[40] = 10.0;
        let mut abs: Vec<f64> = k.iter().map(|v| v.abs()).collect();
        abs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = (abs[31] + abs[32]) / 2.0;
        let series = CurvatureSeries {
            k,
            tau: median * 2.0,
            gamma: 2.0,
        };
        let peaks = detect_peaks(&series, &contour);
        assert_eq!(peaks.indices, vec![10, 40]);
    }

    #[test]
    fn huge_gamma_empties_the_peak_set() {
        let path = rasterized_disk(30);
        let t = sample_count(crate::segmentation::contour_length(&path));
        let contour = resample_contour(&path, t).unwrap();
        let series = curvature_series(&contour, Some(0.02 * t as f64), 1e9).unwrap();
        let peaks = detect_peaks(&series, &contour);
        assert!(peaks.indices.is_empty());
    }

    #[test]
    fn square_corners_fire_exactly_four_peaks() {
        let mut mask = Array2::from_elem((400, 400), false);
        for r in 50..350 {
            for c in 50..350 {
                mask[(r, c)] = true;
            }
        }
        let path = trace_contour(&mask).unwrap();
        let t = sample_count(crate::segmentation::contour_length(&path));
        let contour = resample_contour(&path, t).unwrap();
        let series =
            curvature_series(&contour, Some(DEFAULT_SIGMA_FACTOR * t as f64), DEFAULT_GAMMA)
                .unwrap();
        let peaks = detect_peaks(&series, &contour);
        assert_eq!(peaks.indices.len(), 4, "peaks at {:?}", peaks.indices);
        let quarter = t as f64 / 4.0;
        for gap in &peaks.pixel_gaps {
            assert!((gap - quarter).abs() <= 2.0, "gap {gap} vs {quarter}");
        }
        let sd = std_or_zero(&peaks.pixel_gaps);
        assert!(sd <= 2.0, "pixel gap sd {sd}");
    }

    #[test]
    fn peaks_are_translation_invariant() {
        let path = rasterized_disk(40);
        let t = sample_count(crate::segmentation::contour_length(&path));
        let base = resample_contour(&path, t).unwrap();
        let shifted = ParametricContour {
            x: base.x.iter().map(|v| v + 137.25).collect(),
            y: base.y.iter().map(|v| v - 54.5).collect(),
        };
        let sa = curvature_series(&base, Some(0.02 * t as f64), 1.2).unwrap();
        let sb = curvature_series(&shifted, Some(0.02 * t as f64), 1.2).unwrap();
        let pa = detect_peaks(&sa, &base);
        let pb = detect_peaks(&sb, &shifted);
        assert_eq!(pa.indices, pb.indices);
    }

    #[test]
    fn block_aggregates_cyclic_gaps() {
        let contour = ParametricContour {
            x: (0..300).map(|i| i as f64).collect(),
            y: vec![0.0; 300],
        };
        let mut peaks = PeakSet {
            indices: vec![0, 100, 200],
            geometric_gaps: Vec::new(),
            pixel_gaps: Vec::new(),
        };
        // recompute gaps the way detect_peaks does
        for w in 0..3 {
            let a = peaks.indices[w];
            let b = peaks.indices[(w + 1) % 3];
            let (xa, ya) = contour.point(a);
            let (xb, yb) = contour.point(b);
            peaks
                .geometric_gaps
                .push(((xb - xa).powi(2) + (yb - ya).powi(2)).sqrt());
            peaks.pixel_gaps.push(((b + 300 - a) % 300) as f64);
        }
        let block = curvature_block(&[peaks]);
        assert_eq!(block[1], 100.0); // pixel gap mean
        assert_eq!(block[3], 0.0); // pixel gap sd
        assert_eq!(block[4], 3.0); // mean peak count
    }

    #[test]
    fn peak_free_segments_produce_zero_features() {
        let block = curvature_block(&[PeakSet::default(), PeakSet::default()]);
        assert_eq!(block, [0.0; 5]);
    }

    #[test]
    fn degenerate_contour_is_rejected() {
        let path: Vec<ContourPoint> = vec![(5, 5); 10];
        assert!(resample_contour(&path, 64).is_err());
    }

    #[test]
    fn sample_count_is_clamped_power_of_two() {
        assert_eq!(sample_count(10.0), 64);
        assert_eq!(sample_count(300.0), 512);
        assert_eq!(sample_count(1e9), 4096);
        for p in [65.0, 100.0, 1000.0, 2500.0] {
            let t = sample_count(p);
            assert!(t.is_power_of_two());
            assert!(t as f64 >= p.min(4096.0));
        }
    }

    #[test]
    fn resampled_spacing_is_uniform_on_smooth_contours() {
        // dense smooth polyline; resampled euclidean spacing should be
        // uniform within 10%
        let dense: Vec<ContourPoint> = (0..8192)
            .map(|i| {
                let th = TAU * i as f64 / 8192.0;
                let r = 1000.0 * (80.0 + 12.0 * (3.0 * th).sin());
                ((r * th.cos()) as i64, (r * th.sin()) as i64)
            })
            .collect();
        let c = resample_contour(&dense, 512).unwrap();
        let mut lengths = Vec::with_capacity(512);
        for i in 0..512 {
            let (x0, y0) = c.point(i);
            let (x1, y1) = c.point((i + 1) % 512);
            lengths.push(((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt());
        }
        let m = lengths.iter().sum::<f64>() / 512.0;
        for l in &lengths {
            assert!((l - m).abs() / m < 0.10, "spacing {l} vs mean {m}");
        }

        // raster contours: the mean resampled spacing still matches the
        // polyline length budget
        let path = rasterized_disk(35);
        let t = sample_count(crate::segmentation::contour_length(&path));
        let rc = resample_contour(&path, t).unwrap();
        let total: f64 = (0..t)
            .map(|i| {
                let (x0, y0) = rc.point(i);
                let (x1, y1) = rc.point((i + 1) % t);
                ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt()
            })
            .sum();
        // corner-cutting only shortens, and never by much
        let perimeter = crate::segmentation::contour_length(&path);
        let ratio = total / perimeter;
        assert!((0.92..=1.0 + 1e-9).contains(&ratio), "ratio {ratio}");
    }
}
