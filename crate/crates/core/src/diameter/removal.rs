use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::hull::{convex_hull, polygon_diameter, P2};
use crate::geometry::{
    diameter, dist, dot, point_set_diameter, vertices, ConvexBody, GeometryError, Point,
    TangentConfig,
};

pub const DEFAULT_REMOVAL_SAMPLES: usize = 20_000;

const SHARD: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovalBound {
    /// Largest distance between two kept sample points.
    pub lower_bound: f64,
    pub samples: usize,
    /// Samples in `C` outside every removed set.
    pub kept: usize,
    pub full_diameter: f64,
}

/// Lower bound on `diam(C \ ∪S)` from the vertices of `C`, points along
/// its boundary and random interior points; every pair used lies in `C`
/// and outside each closed member of `S`.
pub fn diameter_after_removal(
    c: &ConvexBody,
    removed: &[ConvexBody],
    samples: usize,
    seed: u64,
    clip_radius: f64,
) -> Result<RemovalBound, GeometryError> {
    let d = c.dim();
    if let Some(s) = removed.iter().find(|s| s.dim() != d) {
        return Err(GeometryError::DimensionMismatch {
            expected: d,
            got: s.dim(),
        });
    }
    let verts = vertices(c, clip_radius)?;
    let full_diameter = diameter(c, clip_radius)?;
    let mut lo = verts[0].clone();
    let mut hi = verts[0].clone();
    for p in &verts {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let boundary = samples / 2;
    let hull: Vec<P2> = if d == 2 {
        convex_hull(&verts.iter().map(|p| [p[0], p[1]]).collect::<Vec<_>>())
    } else {
        Vec::new()
    };
    let shards: Vec<usize> = (0..samples.div_ceil(SHARD)).collect();
    let keep =
        |x: &Point| c.contains_point(x, 1e-12) && !removed.iter().any(|s| s.contains_point(x, 0.0));
    let parts = crate::par::map(&shards, |&shard| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shard as u64);
        let start = shard * SHARD;
        let end = (start + SHARD).min(samples);
        let mut out = Vec::new();
        for i in start..end {
            let x = if i < boundary {
                if d == 2 && hull.len() >= 2 {
                    perimeter_point(&hull, i as f64 / boundary as f64)
                } else {
                    let a = &verts[rng.random_range(0..verts.len())];
                    let b = &verts[rng.random_range(0..verts.len())];
                    let t: f64 = rng.random();
                    a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect()
                }
            } else {
                (0..d)
                    .map(|k| lo[k] + rng.random::<f64>() * (hi[k] - lo[k]))
                    .collect()
            };
            if keep(&x) {
                out.push(x);
            }
        }
        out
    });
    let mut pts: Vec<Point> = verts.iter().filter(|v| keep(v)).cloned().collect();
    pts.extend(parts.into_iter().flatten());
    let lower_bound = if d == 2 {
        polygon_diameter(&convex_hull(
            &pts.iter().map(|p| [p[0], p[1]]).collect::<Vec<_>>(),
        ))
    } else {
        extreme_pair_diameter(&pts, d)
    };
    Ok(RemovalBound {
        lower_bound: lower_bound.min(full_diameter),
        samples: samples + verts.len(),
        kept: pts.len(),
        full_diameter,
    })
}

fn perimeter_point(hull: &[P2], s: f64) -> Point {
    let n = hull.len();
    let len: Vec<f64> = (0..n).map(|i| dist(&hull[i], &hull[(i + 1) % n])).collect();
    let mut target = s * len.iter().sum::<f64>();
    for i in 0..n {
        if target <= len[i] || i == n - 1 {
            let t = (target / len[i]).clamp(0.0, 1.0);
            let (p, q) = (hull[i], hull[(i + 1) % n]);
            return vec![p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
        }
        target -= len[i];
    }
    unreachable!()
}

/// Exact diameter over the points extreme in many directions.
fn extreme_pair_diameter(pts: &[Point], d: usize) -> f64 {
    if pts.len() <= 256 {
        return point_set_diameter(pts);
    }
    let mut cand: Vec<Point> = Vec::new();
    for u in TangentConfig::default().normals(d) {
        let best = pts
            .iter()
            .max_by(|a, b| dot(a, &u).total_cmp(&dot(b, &u)))
            .expect("nonempty");
        cand.push(best.clone());
    }
    point_set_diameter(&cand)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_hole_keeps_endpoints() {
        let c = ConvexBody::boxed(vec![0.0, 0.0], vec![1.0, 0.01]).unwrap();
        let hole = ConvexBody::ball(vec![0.5, 0.005], 0.01).unwrap();
        let r = diameter_after_removal(&c, std::slice::from_ref(&hole), 2000, 1, 1e6).unwrap();
        assert!(r.lower_bound >= 0.49 && r.lower_bound <= r.full_diameter);
        // oracle: both far corners avoid the hole
        assert!(!hole.contains_point(&[0.0, 0.0], 0.0) && !hole.contains_point(&[1.0, 0.01], 0.0));
    }

    #[test]
    fn nothing_removed_gives_diameter() {
        let c = ConvexBody::polygon(&[[0.0, 0.0], [3.0, 0.0], [1.0, 2.0]]).unwrap();
        let r = diameter_after_removal(&c, &[], 500, 2, 1e6).unwrap();
        assert!((r.lower_bound - 3.0).abs() < 1e-12);
        let cube = ConvexBody::cube(3, 0.0, 1.0);
        let r = diameter_after_removal(&cube, &[], 500, 2, 1e6).unwrap();
        assert!((r.lower_bound - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn full_cover_leaves_nothing() {
        let c = ConvexBody::cube(2, 0.0, 1.0);
        let big = ConvexBody::cube(2, -1.0, 3.0);
        let r = diameter_after_removal(&c, &[big], 1000, 3, 1e6).unwrap();
        assert_eq!((r.lower_bound, r.kept), (0.0, 0));
    }
}
