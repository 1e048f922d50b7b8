//! SLIC superpixels: k-means in combined CIELAB + position space with
//! grid seeding, windowed assignment and 4-connectivity enforcement.

use ndarray::Array2;

use crate::corpus::PreprocessedImage;
use crate::error::{Error, Result};

/// Dense per-pixel labeling with contiguous labels `0..count`.
#[derive(Debug, Clone)]
pub struct LabelMap {
    pub labels: Array2<u32>,
    pub count: usize,
}

#[derive(Clone, Copy)]
struct Center {
    l: f64,
    a: f64,
    b: f64,
    row: f64,
    col: f64,
}

/// sRGB in [0, 1] to CIELAB (D65).
pub fn srgb_to_lab(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    fn lin(u: f64) -> f64 {
        if u <= 0.04045 {
            u / 12.92
        } else {
            ((u + 0.055) / 1.055).powf(2.4)
        }
    }
    let (rl, gl, bl) = (lin(r), lin(g), lin(b));
    let x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
    let y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
    let z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;

    fn f(t: f64) -> f64 {
        const DELTA: f64 = 6.0 / 29.0;
        if t > DELTA * DELTA * DELTA {
            t.cbrt()
        } else {
            t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
        }
    }
    // D65 white point
    let (xn, yn, zn) = (0.95047, 1.0, 1.08883);
    let (fx, fy, fz) = (f(x / xn), f(y / yn), f(z / zn));
    (116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

/// Segments an image into roughly `k` superpixels.
///
/// `compactness` trades color against spatial proximity (the SLIC `m`
/// parameter). Fully deterministic: grid seeding, fixed iteration count,
/// raster-order ties.
pub fn slic_segment(
    image: &PreprocessedImage,
    k: usize,
    compactness: f64,
    iterations: usize,
) -> Result<LabelMap> {
    let (h, w) = image.luminance.dim();
    let n = h * w;
    if k == 0 {
        return Err(Error::InvalidParameter("slic k must be >= 1".into()));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "slic k = {k} exceeds pixel count {n}"
        )));
    }
    if !compactness.is_finite() || compactness <= 0.0 {
        return Err(Error::InvalidParameter(
            "slic compactness must be > 0".into(),
        ));
    }

    let mut lab = Vec::with_capacity(n);
    for r in 0..h {
        for c in 0..w {
            lab.push(srgb_to_lab(
                image.red[(r, c)],
                image.green[(r, c)],
                image.blue[(r, c)],
            ));
        }
    }
    let lab_at = |r: usize, c: usize| lab[r * w + c];

    // Grid seeding at cell centers.
    let step = (n as f64 / k as f64).sqrt();
    let nx = ((w as f64 / step).round() as usize).max(1);
    let ny = ((h as f64 / step).round() as usize).max(1);
    let (sx, sy) = (w as f64 / nx as f64, h as f64 / ny as f64);
    let mut centers = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let col = ((i as f64 + 0.5) * sx).floor().min(w as f64 - 1.0) as usize;
            let row = ((j as f64 + 0.5) * sy).floor().min(h as f64 - 1.0) as usize;
            let (row, col) = perturb_seed(&lab, h, w, row, col);
            let (l, a, b) = lab_at(row, col);
            centers.push(Center {
                l,
                a,
                b,
                row: row as f64,
                col: col as f64,
            });
        }
    }

    let search = step.ceil() as i64;
    let spatial_weight = (compactness / step) * (compactness / step);
    let mut labels = vec![u32::MAX; n];
    let mut dists = vec![f64::INFINITY; n];

    for _ in 0..iterations {
        dists.iter_mut().for_each(|d| *d = f64::INFINITY);
        for (ci, center) in centers.iter().enumerate() {
            let r0 = ((center.row as i64) - search).max(0) as usize;
            let r1 = (((center.row as i64) + search + 1).min(h as i64)) as usize;
            let c0 = ((center.col as i64) - search).max(0) as usize;
            let c1 = (((center.col as i64) + search + 1).min(w as i64)) as usize;
            for r in r0..r1 {
                for c in c0..c1 {
                    let (l, a, b) = lab_at(r, c);
                    let dc = (l - center.l).powi(2)
                        + (a - center.a).powi(2)
                        + (b - center.b).powi(2);
                    let ds = (r as f64 - center.row).powi(2) + (c as f64 - center.col).powi(2);
                    let d = dc + ds * spatial_weight;
                    let idx = r * w + c;
                    if d < dists[idx] {
                        dists[idx] = d;
                        labels[idx] = ci as u32;
                    }
                }
            }
        }

        // Update step: mean Lab + position per cluster.
        let mut acc = vec![[0.0f64; 6]; centers.len()];
        for r in 0..h {
            for c in 0..w {
                let ci = labels[r * w + c];
                if ci == u32::MAX {
                    continue;
                }
                let (l, a, b) = lab_at(r, c);
                let s = &mut acc[ci as usize];
                s[0] += l;
                s[1] += a;
                s[2] += b;
                s[3] += r as f64;
                s[4] += c as f64;
                s[5] += 1.0;
            }
        }
        for (center, s) in centers.iter_mut().zip(acc.iter()) {
            if s[5] > 0.0 {
                center.l = s[0] / s[5];
                center.a = s[1] / s[5];
                center.b = s[2] / s[5];
                center.row = s[3] / s[5];
                center.col = s[4] / s[5];
            }
        }
    }

    // Orphans (possible when search windows miss pixels) adopt the nearest
    // seeded grid cell.
    for r in 0..h {
        for c in 0..w {
            let idx = r * w + c;
            if labels[idx] == u32::MAX {
                let i = ((c as f64 / sx) as usize).min(nx - 1);
                let j = ((r as f64 / sy) as usize).min(ny - 1);
                labels[idx] = (j * nx + i) as u32;
            }
        }
    }

    let min_size = (n / k / 4).max(1);
    let (labels, count) = enforce_connectivity(&labels, h, w, min_size);
    Ok(LabelMap {
        labels: Array2::from_shape_vec((h, w), labels).expect("shape"),
        count,
    })
}

/// Moves a seed to the lowest-gradient position in its 3x3 neighborhood
/// (strictly lower wins, raster order breaks ties).
fn perturb_seed(lab: &[(f64, f64, f64)], h: usize, w: usize, row: usize, col: usize) -> (usize, usize) {
    let grad = |r: usize, c: usize| -> f64 {
        let right = lab[r * w + (c + 1).min(w - 1)];
        let left = lab[r * w + c.saturating_sub(1)];
        let down = lab[(r + 1).min(h - 1) * w + c];
        let up = lab[r.saturating_sub(1) * w + c];
        let dx = (right.0 - left.0).powi(2) + (right.1 - left.1).powi(2) + (right.2 - left.2).powi(2);
        let dy = (down.0 - up.0).powi(2) + (down.1 - up.1).powi(2) + (down.2 - up.2).powi(2);
        dx + dy
    };
    let mut best = (row, col);
    let mut best_g = grad(row, col);
    for dr in -1i64..=1 {
        for dc in -1i64..=1 {
            let (rr, cc) = (row as i64 + dr, col as i64 + dc);
            if rr < 0 || rr >= h as i64 || cc < 0 || cc >= w as i64 {
                continue;
            }
            let g = grad(rr as usize, cc as usize);
            if g < best_g {
                best_g = g;
                best = (rr as usize, cc as usize);
            }
        }
    }
    best
}

/// Relabels 4-connected components in raster order; components smaller than
/// `min_size` are absorbed into the preceding adjacent component. Returns
/// contiguous labels `0..count`.
fn enforce_connectivity(labels: &[u32], h: usize, w: usize, min_size: usize) -> (Vec<u32>, usize) {
    const UNSET: u32 = u32::MAX;
    let mut out = vec![UNSET; labels.len()];
    let mut next = 0u32;
    let mut component = Vec::new();
    let mut stack = Vec::new();

    for start in 0..labels.len() {
        if out[start] != UNSET {
            continue;
        }
        let old = labels[start];
        component.clear();
        stack.clear();
        stack.push(start);
        out[start] = next;
        // Adjacent previously-relabeled component (left/up of the seed scan).
        let mut adjacent: Option<u32> = None;
        while let Some(idx) = stack.pop() {
            component.push(idx);
            let (r, c) = (idx / w, idx % w);
            let neighbors = [
                (r.wrapping_sub(1), c),
                (r + 1, c),
                (r, c.wrapping_sub(1)),
                (r, c + 1),
            ];
            for (rr, cc) in neighbors {
                if rr >= h || cc >= w {
                    continue;
                }
                let nidx = rr * w + cc;
                if labels[nidx] == old && out[nidx] == UNSET {
                    out[nidx] = next;
                    stack.push(nidx);
                } else if out[nidx] != UNSET && out[nidx] != next {
                    adjacent.get_or_insert(out[nidx]);
                }
            }
        }
        if component.len() < min_size {
            if let Some(adj) = adjacent {
                for &idx in &component {
                    out[idx] = adj;
                }
                continue;
            }
        }
        next += 1;
    }

    // Holes left by absorption: compress label ids to 0..count.
    let mut remap = vec![UNSET; next as usize];
    let mut compact = 0u32;
    for &l in out.iter() {
        let slot = &mut remap[l as usize];
        if *slot == UNSET {
            *slot = compact;
            compact += 1;
        }
    }
    let out = out.into_iter().map(|l| remap[l as usize]).collect();
    (out, compact as usize)
}
