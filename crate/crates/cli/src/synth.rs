//! Synthetic test corpus: twelve procedural "painters", each with a
//! distinct texture family, so the whole pipeline can run without any real
//! paintings. Deterministic for a given seed.

use std::path::{Path, PathBuf};

use anyhow::Context;
use image::{Rgb, RgbImage};

/// Painter names of the synthetic corpus, in chronological order.
pub const SYNTH_PAINTERS: [&str; 12] = [
    "Amber", "Basalt", "Cobalt", "Drift", "Ember", "Fresco", "Gesso", "Haze", "Indigo", "Jasper",
    "Krait", "Lumen",
];

struct Lcg(u64);

impl Lcg {
    fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(0x2545F4914F6CDD1D))
    }

    fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Writes `per_painter` PNGs for each of the twelve painters plus a
/// `manifest.csv`, and returns the manifest path.
pub fn generate_corpus(
    dir: &Path,
    per_painter: usize,
    size: u32,
    seed: u64,
) -> anyhow::Result<PathBuf> {
    anyhow::ensure!(per_painter >= 1, "need at least one painting per painter");
    anyhow::ensure!(size >= 64, "canvas too small");
    std::fs::create_dir_all(dir)?;

    let mut manifest = String::from("painter,title,year,source,rank\n");
    for (rank, painter) in SYNTH_PAINTERS.iter().enumerate() {
        for idx in 0..per_painter {
            let file = format!("{painter}_{idx:02}.png");
            let img = painting(rank, idx, size, seed);
            img.save(dir.join(&file))
                .with_context(|| format!("writing {file}"))?;
            manifest.push_str(&format!(
                "{painter},{painter} study {idx},{},{file},{rank}\n",
                1600 + rank * 30 + idx
            ));
        }
    }
    let manifest_path = dir.join("manifest.csv");
    std::fs::write(&manifest_path, manifest)?;
    Ok(manifest_path)
}

/// One procedural painting. Painter rank controls the texture family:
/// blob count and size, stripe frequency and palette all drift with rank so
/// painters stay separable in feature space.
fn painting(rank: usize, idx: usize, size: u32, seed: u64) -> RgbImage {
    let mut rng = Lcg::new(seed ^ ((rank as u64) << 32) ^ idx as u64);
    let n = size as i64;

    // per-painter knobs
    let blob_count = 4 + rank * 5;
    let blob_radius = (size as f64) * (0.16 - 0.01 * rank as f64).max(0.035);
    let stripe_freq = 2.0 + rank as f64 * 1.5;
    let palette_phase = rank as f64 * 0.5;

    let blobs: Vec<(f64, f64, f64)> = (0..blob_count)
        .map(|_| {
            (
                rng.next_f64() * size as f64,
                rng.next_f64() * size as f64,
                blob_radius * (0.6 + 0.8 * rng.next_f64()),
            )
        })
        .collect();
    let stripe_angle = rng.next_f64() * std::f64::consts::PI;
    let (ca, sa) = (stripe_angle.cos(), stripe_angle.sin());

    let mut img = RgbImage::new(size, size);
    for y in 0..n {
        for x in 0..n {
            let (fx, fy) = (x as f64 / size as f64, y as f64 / size as f64);
            let u = fx * ca + fy * sa;
            let mut v = 0.35 + 0.25 * (std::f64::consts::TAU * stripe_freq * u).sin();
            for &(bx, by, r) in &blobs {
                let d2 = (x as f64 - bx).powi(2) + (y as f64 - by).powi(2);
                if d2 < r * r {
                    v += 0.45 * (1.0 - d2 / (r * r));
                }
            }
            let v = v.clamp(0.0, 1.0);
            let r = (v * 255.0 * (0.6 + 0.4 * (palette_phase).sin().abs())) as u8;
            let g = ((1.0 - v) * 255.0 * (0.5 + 0.5 * (palette_phase * 1.7).cos().abs())) as u8;
            let b = ((0.5 + 0.5 * (std::f64::consts::TAU * v + palette_phase).cos()) * 255.0) as u8;
            img.put_pixel(x as u32, y as u32, Rgb([r, g, b]));
        }
    }
    img
}
