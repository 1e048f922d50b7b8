//! Preprocessing of decoded rasters into the fixed 800x800 working format,
//! plus binarization and gray-level histograms.
//!
//! Pipeline: center-crop to the largest square, bilinear resize to 800x800,
//! per-channel histogram equalization (256 levels), then a 3x3 median filter.
//! Channels are kept as `f64` in [0, 1]; luminance uses ITU-R BT.601 weights
//! and is processed as its own fourth channel.

use image::{imageops, DynamicImage, RgbImage};
use ndarray::Array2;

use crate::error::{Error, Result};

/// Side length of every preprocessed image.
pub const IMAGE_SIZE: usize = 800;

/// An 800x800 painting raster with per-channel values in [0, 1].
#[derive(Debug, Clone)]
pub struct PreprocessedImage {
    pub red: Array2<f64>,
    pub green: Array2<f64>,
    pub blue: Array2<f64>,
    pub luminance: Array2<f64>,
}

impl PreprocessedImage {
    pub fn channels(&self) -> [&Array2<f64>; 4] {
        [&self.red, &self.green, &self.blue, &self.luminance]
    }

    pub const CHANNEL_NAMES: [&'static str; 4] = ["r", "g", "b", "lum"];
}

/// BT.601 luma from RGB in [0, 1].
pub fn luminance_bt601(r: f64, g: f64, b: f64) -> f64 {
    0.299 * r + 0.587 * g + 0.114 * b
}

/// Decodes, crops, resizes and normalizes an image file.
pub fn preprocess(path: &std::path::Path) -> Result<PreprocessedImage> {
    let img = image::open(path)?;
    preprocess_raster(&img)
}

/// Preprocesses an already-decoded raster.
pub fn preprocess_raster(img: &DynamicImage) -> Result<PreprocessedImage> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::DegenerateImage {
            width: w,
            height: h,
        });
    }

    let side = w.min(h);
    let x0 = (w - side) / 2;
    let y0 = (h - side) / 2;
    let cropped = img.crop_imm(x0, y0, side, side);
    let resized: RgbImage = imageops::resize(
        &cropped.to_rgb8(),
        IMAGE_SIZE as u32,
        IMAGE_SIZE as u32,
        imageops::FilterType::Triangle,
    );

    let n = IMAGE_SIZE;
    let mut red = Array2::zeros((n, n));
    let mut green = Array2::zeros((n, n));
    let mut blue = Array2::zeros((n, n));
    let mut lum = Array2::zeros((n, n));
    for (x, y, px) in resized.enumerate_pixels() {
        let (r, c) = (y as usize, x as usize);
        let rv = px[0] as f64 / 255.0;
        let gv = px[1] as f64 / 255.0;
        let bv = px[2] as f64 / 255.0;
        red[(r, c)] = rv;
        green[(r, c)] = gv;
        blue[(r, c)] = bv;
        lum[(r, c)] = luminance_bt601(rv, gv, bv);
    }

    for ch in [&mut red, &mut green, &mut blue, &mut lum] {
        equalize_channel(ch);
        *ch = median_filter_3x3(ch);
    }

    Ok(PreprocessedImage {
        red,
        green,
        blue,
        luminance: lum,
    })
}

/// In-place 256-level histogram equalization of a [0, 1] channel.
///
/// A single-level channel is left untouched (the mapping is undefined there
/// and the identity is the only fixed point).
pub fn equalize_channel(channel: &mut Array2<f64>) {
    if channel.is_empty() {
        return;
    }
    let mut hist = [0u64; 256];
    for &v in channel.iter() {
        hist[quantize_256(v)] += 1;
    }
    let total: u64 = channel.len() as u64;

    let mut cdf = [0u64; 256];
    let mut acc = 0u64;
    for (i, &h) in hist.iter().enumerate() {
        acc += h;
        cdf[i] = acc;
    }
    let cdf_min = cdf
        .iter()
        .copied()
        .find(|&c| c > 0)
        .expect("channel is non-empty");
    if cdf_min == total {
        return; // single occupied bin
    }
    let denom = (total - cdf_min) as f64;
    let mut map = [0.0f64; 256];
    for i in 0..256 {
        let num = cdf[i].saturating_sub(cdf_min) as f64;
        map[i] = (num / denom * 255.0).round() / 255.0;
    }
    channel.mapv_inplace(|v| map[quantize_256(v)]);
}

/// 3x3 median filter with windows clipped at the borders. The output pixel
/// is the middle element (index len/2) of the sorted window, so every output
/// value is one of the input values.
pub fn median_filter_3x3(channel: &Array2<f64>) -> Array2<f64> {
    let (h, w) = channel.dim();
    let mut out = Array2::zeros((h, w));
    let mut window = [0.0f64; 9];
    for r in 0..h {
        for c in 0..w {
            let mut n = 0;
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    let (rr, cc) = (r as i64 + dr, c as i64 + dc);
                    if rr >= 0 && rr < h as i64 && cc >= 0 && cc < w as i64 {
                        window[n] = channel[(rr as usize, cc as usize)];
                        n += 1;
                    }
                }
            }
            let win = &mut window[..n];
            win.sort_by(|a, b| a.partial_cmp(b).unwrap());
            out[(r, c)] = win[n / 2];
        }
    }
    out
}

fn quantize_256(v: f64) -> usize {
    ((v * 255.0).round() as i64).clamp(0, 255) as usize
}

/// Otsu threshold over the 256-bin histogram of a [0, 1] channel.
///
/// Returns the threshold as the upper edge of the chosen bin; pixels
/// strictly above it are foreground. A single-level channel yields an
/// all-false mask with the constant reported as the threshold.
pub fn to_binary(luminance: &Array2<f64>) -> (Array2<bool>, f64) {
    let mut hist = [0u64; 256];
    for &v in luminance.iter() {
        hist[quantize_256(v)] += 1;
    }
    let occupied = hist.iter().filter(|&&h| h > 0).count();
    if occupied <= 1 {
        let constant = luminance.iter().next().copied().unwrap_or(0.0);
        return (Array2::from_elem(luminance.dim(), false), constant);
    }
    let bin = otsu_threshold(&hist);
    // Threshold placed between bin centers so bin membership decides the mask.
    let threshold = (bin as f64 + 0.5) / 255.0;
    (luminance.mapv(|v| v > threshold), threshold)
}

/// Index of the histogram bin maximizing Otsu's between-class variance
/// (first argmax). Pixels in bins <= the returned index form the background.
pub fn otsu_threshold(hist: &[u64; 256]) -> usize {
    let total: u64 = hist.iter().sum();
    let total_sum: f64 = hist
        .iter()
        .enumerate()
        .map(|(i, &h)| i as f64 * h as f64)
        .sum();

    let mut best = (0usize, f64::NEG_INFINITY);
    let mut w_bg = 0u64;
    let mut sum_bg = 0.0f64;
    for (t, &count) in hist.iter().enumerate() {
        w_bg += count;
        if w_bg == 0 {
            continue;
        }
        let w_fg = total - w_bg;
        if w_fg == 0 {
            break;
        }
        sum_bg += t as f64 * count as f64;
        let mean_bg = sum_bg / w_bg as f64;
        let mean_fg = (total_sum - sum_bg) / w_fg as f64;
        let var = w_bg as f64 * w_fg as f64 * (mean_bg - mean_fg).powi(2);
        if var > best.1 {
            best = (t, var);
        }
    }
    best.0
}

/// Normalized 256-bin gray-level histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayHistogram {
    pub bins: Vec<f64>,
}

impl GrayHistogram {
    pub fn mass(&self) -> f64 {
        self.bins.iter().sum()
    }
}

/// 256-bin normalized histogram of a [0, 1] luminance channel.
pub fn gray_histogram(luminance: &Array2<f64>) -> GrayHistogram {
    let mut counts = [0u64; 256];
    for &v in luminance.iter() {
        counts[quantize_256(v)] += 1;
    }
    let total = luminance.len() as f64;
    GrayHistogram {
        bins: counts.iter().map(|&c| c as f64 / total).collect(),
    }
}

/// Per-bin mean of a set of histograms.
pub fn mean_histogram(histograms: &[GrayHistogram]) -> GrayHistogram {
    assert!(!histograms.is_empty());
    let mut bins = vec![0.0f64; 256];
    for h in histograms {
        for (b, &v) in bins.iter_mut().zip(h.bins.iter()) {
            *b += v;
        }
    }
    let n = histograms.len() as f64;
    bins.iter_mut().for_each(|b| *b /= n);
    GrayHistogram { bins }
}
