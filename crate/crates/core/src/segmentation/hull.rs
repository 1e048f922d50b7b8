//! Convex hulls (Andrew's monotone chain) and polygon areas (shoelace).

/// Convex hull of a point set, vertices in counter-clockwise order.
/// Degenerate inputs (single point, collinear sets) yield the reduced hull.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }

    fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    }

    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a simple polygon (absolute value).
pub fn polygon_area(polygon: &[(f64, f64)]) -> f64 {
    if polygon.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..polygon.len() {
        let (x0, y0) = polygon[i];
        let (x1, y1) = polygon[(i + 1) % polygon.len()];
        acc += x0 * y1 - x1 * y0;
    }
    acc.abs() / 2.0
}

/// Hull polygon and its area in one call.
pub fn hull_with_area(points: &[(f64, f64)]) -> (Vec<(f64, f64)>, f64) {
    let hull = convex_hull(points);
    let area = polygon_area(&hull);
    (hull, area)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_its_own_hull() {
        let pts = [(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)];
        let (hull, area) = hull_with_area(&pts);
        assert_eq!(hull.len(), 3);
        assert!((area - 6.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_points_have_zero_area() {
        let pts = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)];
        let (hull, area) = hull_with_area(&pts);
        assert!(hull.len() <= 2);
        assert_eq!(area, 0.0);
    }

    #[test]
    fn single_point() {
        let (hull, area) = hull_with_area(&[(2.0, 5.0)]);
        assert_eq!(hull, vec![(2.0, 5.0)]);
        assert_eq!(area, 0.0);
    }

    #[test]
    fn interior_points_are_dropped() {
        let pts = [
            (0.0, 0.0),
            (10.0, 0.0),
            (10.0, 10.0),
            (0.0, 10.0),
            (5.0, 5.0),
            (2.0, 7.0),
        ];
        let (hull, area) = hull_with_area(&pts);
        assert_eq!(hull.len(), 4);
        assert!((area - 100.0).abs() < 1e-12);
    }

    /// Brute-force oracle: the hull area equals the count of points on a fine
    /// grid lying inside every half-plane spanned by hull edges, times the
    /// cell area.
    #[test]
    fn plus_pentomino_hull_matches_halfplane_rasterization() {
        // five unit squares in a plus; corner points of the squares
        let mut pts = Vec::new();
        let cells = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)];
        for &(cx, cy) in &cells {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                pts.push(((cx + dx) as f64, (cy + dy) as f64));
            }
        }
        let (hull, area) = hull_with_area(&pts);
        // octagon: 3x3 square minus four half-unit corner triangles
        assert!((area - 7.0).abs() < 1e-12);

        let inside = |p: (f64, f64)| -> bool {
            for i in 0..hull.len() {
                let a = hull[i];
                let b = hull[(i + 1) % hull.len()];
                let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                if cross < 0.0 {
                    return false;
                }
            }
            true
        };
        let steps = 600;
        let cell = 3.0 / steps as f64;
        let mut count = 0usize;
        for i in 0..steps {
            for j in 0..steps {
                let p = ((i as f64 + 0.5) * cell, (j as f64 + 0.5) * cell);
                if inside(p) {
                    count += 1;
                }
            }
        }
        let raster_area = count as f64 * cell * cell;
        assert!(
            (raster_area - area).abs() < 0.05,
            "raster {raster_area} vs shoelace {area}"
        );
    }
}
