//! Moore boundary tracing of binary masks.

use ndarray::Array2;

use crate::error::{Error, Result};

/// A contour pixel, `x` = column, `y` = row.
pub type ContourPoint = (i64, i64);

/// Traces the outer boundary of the largest 4-connected component of `mask`.
///
/// The path is returned counter-clockwise (positive shoelace area in x/y
/// coordinates), closed implicitly: the last point is adjacent to the first.
pub fn trace_contour(mask: &Array2<bool>) -> Result<Vec<ContourPoint>> {
    let component = largest_component(mask)
        .ok_or_else(|| Error::InvalidParameter("empty mask".into()))?;
    let path = moore_trace(&component);
    Ok(ensure_ccw(path))
}

/// Euclidean length of the closed polyline through `path`.
pub fn contour_length(path: &[ContourPoint]) -> f64 {
    if path.len() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..path.len() {
        let (x0, y0) = path[i];
        let (x1, y1) = path[(i + 1) % path.len()];
        total += (((x1 - x0).pow(2) + (y1 - y0).pow(2)) as f64).sqrt();
    }
    total
}

/// Twice the signed area of the closed polygon (positive = counter-clockwise).
pub fn signed_area2(path: &[ContourPoint]) -> i64 {
    let mut acc = 0i64;
    for i in 0..path.len() {
        let (x0, y0) = path[i];
        let (x1, y1) = path[(i + 1) % path.len()];
        acc += x0 * y1 - x1 * y0;
    }
    acc
}

fn ensure_ccw(path: Vec<ContourPoint>) -> Vec<ContourPoint> {
    if signed_area2(&path) < 0 {
        let mut p = path;
        p.reverse();
        p
    } else {
        path
    }
}

fn largest_component(mask: &Array2<bool>) -> Option<Array2<bool>> {
    let (h, w) = mask.dim();
    let mut comp_id = Array2::from_elem((h, w), usize::MAX);
    let mut sizes: Vec<usize> = Vec::new();
    let mut stack = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if !mask[(r, c)] || comp_id[(r, c)] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0usize;
            comp_id[(r, c)] = id;
            stack.push((r, c));
            while let Some((rr, cc)) = stack.pop() {
                size += 1;
                for (nr, nc) in [
                    (rr.wrapping_sub(1), cc),
                    (rr + 1, cc),
                    (rr, cc.wrapping_sub(1)),
                    (rr, cc + 1),
                ] {
                    if nr < h && nc < w && mask[(nr, nc)] && comp_id[(nr, nc)] == usize::MAX {
                        comp_id[(nr, nc)] = id;
                        stack.push((nr, nc));
                    }
                }
            }
            sizes.push(size);
        }
    }
    let best = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))? // first largest wins
        .0;
    let mut out = Array2::from_elem((h, w), false);
    for ((r, c), &id) in comp_id.indexed_iter() {
        if id == best {
            out[(r, c)] = true;
        }
    }
    Some(out)
}

/// Moore-neighbor tracing with Jacob's stopping criterion. `(x, y)` points,
/// x = column. The start pixel is the first foreground pixel in raster
/// order, entered from the west.
fn moore_trace(mask: &Array2<bool>) -> Vec<ContourPoint> {
    let (h, w) = mask.dim();
    let is_fg = |p: (i64, i64)| -> bool {
        let (x, y) = p;
        x >= 0 && x < w as i64 && y >= 0 && y < h as i64 && mask[(y as usize, x as usize)]
    };

    let (sr, sc) = mask
        .indexed_iter()
        .find(|&(_, &v)| v)
        .map(|((r, c), _)| (r as i64, c as i64))
        .expect("component is non-empty");
    let start = (sc, sr);

    // Clockwise Moore neighborhood as (dx, dy), rotated so the scan begins
    // at the backtrack direction.
    let mut dirs: Vec<(i64, i64)> = vec![
        (-1, 0),
        (-1, -1),
        (0, -1),
        (1, -1),
        (1, 0),
        (1, 1),
        (0, 1),
        (-1, 1),
    ];
    let rotate_to = |dirs: &mut Vec<(i64, i64)>, d: (i64, i64)| {
        let pos = dirs.iter().position(|&x| x == d).expect("unit offset");
        dirs.rotate_left(pos);
    };
    let add = |p: (i64, i64), d: (i64, i64)| (p.0 + d.0, p.1 + d.1);
    let sub = |a: (i64, i64), b: (i64, i64)| (a.0 - b.0, a.1 - b.1);

    // The west neighbor of the start pixel is background by raster order.
    rotate_to(&mut dirs, (-1, 0));
    let first = dirs.iter().map(|&d| add(start, d)).find(|&p| is_fg(p));
    let Some(first) = first else {
        return vec![start]; // isolated pixel
    };

    let mut path = Vec::new();
    let mut prev = first;
    let mut cur = start;
    loop {
        path.push(cur);
        rotate_to(&mut dirs, sub(prev, cur));
        let next = dirs
            .iter()
            .rev()
            .map(|&d| add(cur, d))
            .find(|&p| is_fg(p))
            .expect("non-isolated pixel has a neighbor");
        if next == start && cur == first {
            break;
        }
        prev = cur;
        cur = next;
        if path.len() > 4 * mask.len() {
            break; // safety net; cannot happen on valid masks
        }
    }
    path
}

/// Foreground pixels with at least one false or out-of-bounds 4-neighbor.
/// Independent of the tracer; used as an oracle in tests and for perimeter
/// sanity checks.
pub fn boundary_pixel_count(mask: &Array2<bool>) -> usize {
    let (h, w) = mask.dim();
    let mut count = 0;
    for r in 0..h {
        for c in 0..w {
            if !mask[(r, c)] {
                continue;
            }
            let edge = r == 0
                || c == 0
                || r == h - 1
                || c == w - 1
                || !mask[(r - 1, c)]
                || !mask[(r + 1, c)]
                || !mask[(r, c - 1)]
                || !mask[(r, c + 1)];
            if edge {
                count += 1;
            }
        }
    }
    count
}
