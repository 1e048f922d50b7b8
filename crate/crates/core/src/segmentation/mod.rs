//! Superpixel segmentation and per-segment shape statistics.

mod contour;
mod hull;
mod slic;

pub use contour::{
    boundary_pixel_count, contour_length, signed_area2, trace_contour, ContourPoint,
};
pub use hull::{convex_hull, hull_with_area, polygon_area};
pub use slic::{slic_segment, srgb_to_lab, LabelMap};

use ndarray::Array2;

use crate::error::{Error, Result};

/// One region of a label map, with its traced outer contour and hull.
#[derive(Debug, Clone)]
pub struct Segment {
    pub label: u32,
    /// Bounding box (row0, col0) of `mask` within the source image.
    pub offset: (usize, usize),
    pub mask: Array2<bool>,
    /// Outer boundary in source-image coordinates, counter-clockwise,
    /// closed implicitly.
    pub contour: Vec<ContourPoint>,
    pub area_px: usize,
    /// Contour pixel count (the perimeter measure used by the features).
    pub perimeter_px: usize,
    /// Area of the convex hull over the pixel corner points of the contour.
    pub hull_area_px: f64,
}

impl Segment {
    pub fn circularity(&self) -> f64 {
        (self.perimeter_px * self.perimeter_px) as f64 / self.area_px as f64
    }

    pub fn hull_ratio(&self) -> f64 {
        self.hull_area_px / self.area_px as f64
    }
}

/// Builds one `Segment` per label of the map.
pub fn segments_from_labels(map: &LabelMap) -> Result<Vec<Segment>> {
    let (h, w) = map.labels.dim();
    let mut bbox: Vec<(usize, usize, usize, usize)> = vec![(h, w, 0, 0); map.count];
    let mut areas = vec![0usize; map.count];
    for ((r, c), &l) in map.labels.indexed_iter() {
        let b = &mut bbox[l as usize];
        b.0 = b.0.min(r);
        b.1 = b.1.min(c);
        b.2 = b.2.max(r);
        b.3 = b.3.max(c);
        areas[l as usize] += 1;
    }

    let mut segments = Vec::with_capacity(map.count);
    for label in 0..map.count {
        let (r0, c0, r1, c1) = bbox[label];
        let mut mask = Array2::from_elem((r1 - r0 + 1, c1 - c0 + 1), false);
        for r in r0..=r1 {
            for c in c0..=c1 {
                if map.labels[(r, c)] == label as u32 {
                    mask[(r - r0, c - c0)] = true;
                }
            }
        }
        let local = trace_contour(&mask)?;
        let contour: Vec<ContourPoint> = local
            .iter()
            .map(|&(x, y)| (x + c0 as i64, y + r0 as i64))
            .collect();
        let corner_points = contour_corner_points(&contour);
        let (_, hull_area) = hull_with_area(&corner_points);
        segments.push(Segment {
            label: label as u32,
            offset: (r0, c0),
            mask,
            perimeter_px: contour.len(),
            contour,
            area_px: areas[label],
            hull_area_px: hull_area,
        });
    }
    Ok(segments)
}

/// The four corner points of every contour pixel, treating pixels as unit
/// squares. Hulls over these cover the rasterized region, so hull area is
/// never below the pixel-count area of a convex region.
pub fn contour_corner_points(contour: &[ContourPoint]) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(contour.len() * 4);
    for &(x, y) in contour {
        for (dx, dy) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            pts.push((x as f64 + dx, y as f64 + dy));
        }
    }
    pts
}

/// The six segment-shape features of a painting, in schema order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeFeatures {
    pub perimeter_mean: f64,
    pub area_mean: f64,
    pub circularity_mean: f64,
    pub segment_count: f64,
    pub hull_area_mean: f64,
    pub hull_ratio_mean: f64,
}

impl ShapeFeatures {
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.perimeter_mean,
            self.area_mean,
            self.circularity_mean,
            self.segment_count,
            self.hull_area_mean,
            self.hull_ratio_mean,
        ]
    }
}

/// Aggregates per-segment statistics. Single-pixel segments count toward
/// `segment_count` but are excluded from the means (their circularity is
/// degenerate).
pub fn shape_stats(segments: &[Segment]) -> Result<ShapeFeatures> {
    if segments.is_empty() {
        return Err(Error::InvalidParameter("no segments".into()));
    }
    let included: Vec<&Segment> = segments.iter().filter(|s| s.area_px > 1).collect();
    let n = included.len() as f64;
    let mean = |f: &dyn Fn(&Segment) -> f64| -> f64 {
        if included.is_empty() {
            0.0
        } else {
            included.iter().map(|s| f(s)).sum::<f64>() / n
        }
    };
    Ok(ShapeFeatures {
        perimeter_mean: mean(&|s| s.perimeter_px as f64),
        area_mean: mean(&|s| s.area_px as f64),
        circularity_mean: mean(&|s| s.circularity()),
        segment_count: segments.len() as f64,
        hull_area_mean: mean(&|s| s.hull_area_px),
        hull_ratio_mean: mean(&|s| s.hull_ratio()),
    })
}
