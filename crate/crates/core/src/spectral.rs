//! Spectral features: Fourier energy statistics per channel and mean local
//! entropy of the luminance.
//!
//! Energy is defined as |F(u,v)|^2 / N for the unnormalized forward DFT,
//! which makes Parseval exact: the grid sums to the sum of squared pixel
//! values. Row/column energy centroids use the non-redundant half spectrum
//! (indices 0..=N/2); means and deviations use the full spectrum.

use ndarray::Array2;
use num_complex::Complex;
use rustfft::FftPlanner;

use crate::corpus::PreprocessedImage;

/// Number of energy features (9 statistics x 4 channels).
pub const ENERGY_FEATURES: usize = 36;

/// Squared-magnitude spectrum of a real channel, scaled by 1/N.
pub fn energy_grid(channel: &Array2<f64>) -> Array2<f64> {
    let (h, w) = channel.dim();
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft_forward(w);
    let col_fft = planner.plan_fft_forward(h);

    let mut data: Vec<Complex<f64>> = channel.iter().map(|&v| Complex::new(v, 0.0)).collect();
    for r in 0..h {
        row_fft.process(&mut data[r * w..(r + 1) * w]);
    }
    let mut col = vec![Complex::new(0.0, 0.0); h];
    for c in 0..w {
        for r in 0..h {
            col[r] = data[r * w + c];
        }
        col_fft.process(&mut col);
        for r in 0..h {
            data[r * w + c] = col[r];
        }
    }

    let n = (h * w) as f64;
    Array2::from_shape_vec((h, w), data.iter().map(|z| z.norm_sqr() / n).collect())
        .expect("shape")
}

/// The nine energy statistics of one channel:
/// total, row mean, row sd, column mean, column sd, row centroid,
/// column centroid, row+column mean, row+column sd.
pub fn energy_stats(channel: &Array2<f64>) -> [f64; 9] {
    let grid = energy_grid(channel);
    let (h, w) = grid.dim();

    let mut row_energy = vec![0.0f64; h];
    let mut col_energy = vec![0.0f64; w];
    for ((r, c), &e) in grid.indexed_iter() {
        row_energy[r] += e;
        col_energy[c] += e;
    }
    let total: f64 = row_energy.iter().sum();

    let centroid = |energies: &[f64]| -> f64 {
        let half = &energies[..energies.len() / 2 + 1];
        let mass: f64 = half.iter().sum();
        if mass == 0.0 {
            return 0.0;
        }
        half.iter()
            .enumerate()
            .map(|(i, &e)| i as f64 * e)
            .sum::<f64>()
            / mass
    };

    let concat: Vec<f64> = row_energy
        .iter()
        .chain(col_energy.iter())
        .copied()
        .collect();

    [
        total,
        mean(&row_energy),
        std_dev(&row_energy),
        mean(&col_energy),
        std_dev(&col_energy),
        centroid(&row_energy),
        centroid(&col_energy),
        mean(&concat),
        std_dev(&concat),
    ]
}

/// All 36 energy features in schema order: statistic-major, channel-minor
/// (r, g, b, luminance).
pub fn energy_block(image: &PreprocessedImage) -> [f64; ENERGY_FEATURES] {
    let per_channel: Vec<[f64; 9]> = image.channels().iter().map(|ch| energy_stats(ch)).collect();
    let mut out = [0.0; ENERGY_FEATURES];
    for stat in 0..9 {
        for ch in 0..4 {
            out[stat * 4 + ch] = per_channel[ch][stat];
        }
    }
    out
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn std_dev(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|&x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt()
}

/// Mean Shannon entropy (bits) of the 256-level gray histogram inside the
/// sliding `window`-sized square around each pixel, windows clipped at the
/// borders. For even sizes the window spans `[-(w-1)/2, w/2]`.
pub fn mean_local_entropy(luminance: &Array2<f64>, window: usize) -> f64 {
    let quant: Array2<u8> = luminance.mapv(|v| ((v * 255.0).round() as i64).clamp(0, 255) as u8);
    mean_local_entropy_quantized(&quant, window)
}

pub fn mean_local_entropy_quantized(quant: &Array2<u8>, window: usize) -> f64 {
    assert!(window >= 1);
    let (h, w) = quant.dim();
    let lo_off = (window as i64 - 1) / 2;
    let hi_off = window as i64 / 2;

    // n * log2(n) for all possible in-window counts
    let max_n = window * window;
    let nlog: Vec<f64> = (0..=max_n)
        .map(|n| {
            if n == 0 {
                0.0
            } else {
                n as f64 * (n as f64).log2()
            }
        })
        .collect();

    let mut hist = vec![0u32; 256];
    let mut acc = 0.0f64;

    for r in 0..h {
        let r0 = (r as i64 - lo_off).max(0) as usize;
        let r1 = ((r as i64 + hi_off).min(h as i64 - 1)) as usize;

        hist.iter_mut().for_each(|x| *x = 0);
        let mut count: usize = 0;
        let mut sum_nlog = 0.0f64;

        let c1_first = ((hi_off).min(w as i64 - 1)) as usize;
        for rr in r0..=r1 {
            for cc in 0..=c1_first {
                let b = quant[(rr, cc)] as usize;
                sum_nlog += nlog[hist[b] as usize + 1] - nlog[hist[b] as usize];
                hist[b] += 1;
                count += 1;
            }
        }
        acc += (count as f64).log2() - sum_nlog / count as f64;

        for c in 1..w {
            // remove the leaving column before adding the entering one so
            // bin counts never exceed the nlog table
            let leave = c as i64 - lo_off - 1;
            if leave >= 0 {
                let cc = leave as usize;
                for rr in r0..=r1 {
                    let b = quant[(rr, cc)] as usize;
                    sum_nlog += nlog[hist[b] as usize - 1] - nlog[hist[b] as usize];
                    hist[b] -= 1;
                    count -= 1;
                }
            }
            let enter = c as i64 + hi_off;
            if enter < w as i64 {
                let cc = enter as usize;
                for rr in r0..=r1 {
                    let b = quant[(rr, cc)] as usize;
                    sum_nlog += nlog[hist[b] as usize + 1] - nlog[hist[b] as usize];
                    hist[b] += 1;
                    count += 1;
                }
            }
            acc += (count as f64).log2() - sum_nlog / count as f64;
        }
    }
    acc / (h * w) as f64
}

/// The two local-entropy features (5- and 50-sized windows).
pub fn local_entropy_block(luminance: &Array2<f64>, windows: (usize, usize)) -> [f64; 2] {
    [
        mean_local_entropy(luminance, windows.0),
        mean_local_entropy(luminance, windows.1),
    ]
}
