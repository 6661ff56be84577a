//! Planar hull helpers.

pub type P2 = [f64; 2];

#[inline]
pub fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Signed shoelace area (positive for counter-clockwise order).
pub fn signed_area(poly: &[P2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s
}

/// Counter-clockwise convex hull by monotone chain. Collinear points and
/// duplicates are dropped, so the result is strictly convex.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0, f64::max);
    let eps = 1e-14 * scale * scale;
    let mut hull: Vec<P2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &P2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Largest distance between two points of a convex polygon, by rotating
/// antipodal pairs.
pub fn polygon_diameter(hull: &[P2]) -> f64 {
    let n = hull.len();
    let d = |a: P2, b: P2| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    match n {
        0 => 0.0,
        1 => 0.0,
        2 => d(hull[0], hull[1]),
        _ => {
            let mut best = 0.0f64;
            let mut j = 1;
            for i in 0..n {
                let ni = (i + 1) % n;
                while cross(hull[i], hull[ni], hull[(j + 1) % n]).abs()
                    > cross(hull[i], hull[ni], hull[j]).abs()
                {
                    j = (j + 1) % n;
                }
                best = best.max(d(hull[i], hull[j])).max(d(hull[ni], hull[j]));
            }
            best
        }
    }
}
