//! Seeded family constructions for experiments and tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::hull::{convex_hull, P2};
use crate::geometry::{norm, BodyKind, ConvexBody, Family, GeometryError, Halfspace};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The `2d` halfspaces `0 <= x_i <= s` with `s^d = eps`: every `2d - 1`
/// of them are unbounded, all together bound a cube of volume `eps`.
pub fn cube_counterexample(d: usize, eps: f64) -> Result<Family, GeometryError> {
    if !(eps > 0.0) {
        return Err(GeometryError::InvalidBody(format!(
            "cube volume {eps} must be positive"
        )));
    }
    let s = eps.powf(1.0 / d as f64);
    let members = (0..d)
        .flat_map(|i| {
            [
                Halfspace::axis_upper(d, i, s),
                Halfspace::axis_lower(d, i, 0.0),
            ]
        })
        .map(ConvexBody::halfspace)
        .collect::<Result<Vec<_>, _>>()?;
    Family::new(d, members)
}

/// Slabs `|u . x - b| <= thickness / 2` through a neighborhood of the
/// origin. Normals lie within `spread` radians of the first axis and the
/// offsets jitter by a hundredth of the thickness, so every `d+1` slabs
/// meet in a long thin cell while its volume stays of order thickness.
pub fn thickened_hyperplanes(
    seed: u64,
    d: usize,
    n: usize,
    thickness: f64,
    spread: f64,
) -> Result<Family, GeometryError> {
    if !(thickness > 0.0 && spread > 0.0) {
        return Err(GeometryError::InvalidBody(
            "thickness and spread must be positive".into(),
        ));
    }
    let mut r = rng(seed);
    let mut members = Vec::with_capacity(n);
    for i in 0..n {
        let u: Vec<f64> = if d == 2 {
            let frac = if n > 1 {
                i as f64 / (n - 1) as f64
            } else {
                0.5
            };
            let a = spread * (frac - 0.5) + spread * 1e-3 * (r.random::<f64>() - 0.5);
            vec![a.cos(), a.sin()]
        } else {
            let mut v = vec![1.0; 1];
            v.extend((1..d).map(|_| spread * (r.random::<f64>() - 0.5)));
            let l = norm(&v);
            v.iter().map(|x| x / l).collect()
        };
        let b = 0.01 * thickness * (r.random::<f64>() - 0.5);
        let lo = Halfspace::new(u.iter().map(|x| -x).collect(), thickness / 2.0 - b)?;
        let hi = Halfspace::new(u, b + thickness / 2.0)?;
        members.push(ConvexBody::hpolytope(d, vec![hi, lo])?);
    }
    Family::new(d, members)
}

/// Boxes with lower corner uniform in `[0, 1]^d` and sides uniform in
/// `[0.5, 1.5]`.
pub fn random_boxes(seed: u64, d: usize, n: usize) -> Result<Family, GeometryError> {
    let mut r = rng(seed);
    let members = (0..n)
        .map(|_| {
            let lo: Vec<f64> = (0..d).map(|_| r.random::<f64>()).collect();
            let hi: Vec<f64> = lo.iter().map(|x| x + 0.5 + r.random::<f64>()).collect();
            ConvexBody::boxed(lo, hi)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Family::new(d, members)
}

/// Unit cubes translated by offsets uniform in `[0, spread]^d`.
pub fn random_translates(
    seed: u64,
    d: usize,
    n: usize,
    spread: f64,
) -> Result<Family, GeometryError> {
    let mut r = rng(seed);
    let members = (0..n)
        .map(|_| {
            let lo: Vec<f64> = (0..d).map(|_| spread * r.random::<f64>()).collect();
            let hi: Vec<f64> = lo.iter().map(|x| x + 1.0).collect();
            ConvexBody::boxed(lo, hi)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Family::new(d, members)
}

pub fn identical_cubes(d: usize, n: usize) -> Result<Family, GeometryError> {
    Family::new(d, vec![ConvexBody::cube(d, 0.0, 1.0); n])
}

/// Hull of `k` points at random angles and radii in `[0.6, 1] radius`.
pub fn random_polygon(
    r: &mut impl Rng,
    center: [f64; 2],
    radius: f64,
    k: usize,
) -> Result<ConvexBody, GeometryError> {
    loop {
        let pts: Vec<P2> = (0..k.max(3))
            .map(|_| {
                let a = std::f64::consts::TAU * r.random::<f64>();
                let l = radius * (0.6 + 0.4 * r.random::<f64>());
                [center[0] + l * a.cos(), center[1] + l * a.sin()]
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() >= 3 {
            return ConvexBody::polygon(&hull);
        }
    }
}

/// Random polygons (`d = 2`) or polytopes cut by random tangent planes
/// of a ball (`d = 3`), centered uniformly in `[0, 1]^d` with radius in
/// `[0.6, 1.2]`.
pub fn random_polytopes(seed: u64, d: usize, n: usize) -> Result<Family, GeometryError> {
    let mut r = rng(seed);
    let mut members = Vec::with_capacity(n);
    for _ in 0..n {
        let c: Vec<f64> = (0..d).map(|_| r.random::<f64>()).collect();
        let rad = 0.6 + 0.6 * r.random::<f64>();
        if d == 2 {
            members.push(random_polygon(&mut r, [c[0], c[1]], rad, 8)?);
            continue;
        }
        let mut hs: Vec<Halfspace> = (0..d)
            .flat_map(|i| {
                [
                    Halfspace::axis_upper(d, i, c[i] + 1.5 * rad),
                    Halfspace::axis_lower(d, i, c[i] - 1.5 * rad),
                ]
            })
            .collect();
        for _ in 0..4 * d {
            let u: Vec<f64> = (0..d).map(|_| r.random::<f64>() - 0.5).collect();
            let l = norm(&u);
            if l < 1e-3 {
                continue;
            }
            let u: Vec<f64> = u.iter().map(|x| x / l).collect();
            let off = u.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>() + rad;
            hs.push(Halfspace::new(u, off)?);
        }
        members.push(ConvexBody::hpolytope(d, hs)?);
    }
    Family::new(d, members)
}

/// Hub square `[-0.3, 0.3]^2` shared by three clusters: boxes around the
/// origin and hulls of the hub with a box around `(12, 0)` or `(0, 12)`.
/// Every triple meets in area at least 0.36, while members of different
/// clusters share neither a disk of area 2 nor a segment of length 3.
pub fn three_cluster(seed: u64, per_cluster: usize) -> Result<Family, GeometryError> {
    let mut r = rng(seed);
    let mut jit = |s: f64| s * (2.0 * r.random::<f64>() - 1.0);
    let hub = [[-0.3, -0.3], [0.3, -0.3], [0.3, 0.3], [-0.3, 0.3]];
    let mut members = Vec::with_capacity(3 * per_cluster);
    for _ in 0..per_cluster {
        let lo = vec![-2.0 + jit(0.2), -2.0 + jit(0.2)];
        let hi = vec![2.0 + jit(0.2), 2.0 + jit(0.2)];
        members.push(ConvexBody::boxed(lo, hi)?);
    }
    for far in [[12.0, 0.0], [0.0, 12.0]] {
        for _ in 0..per_cluster {
            let mut pts: Vec<P2> = hub.to_vec();
            for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
                pts.push([
                    far[0] + sx * (2.0 + jit(0.2)),
                    far[1] + sy * (2.0 + jit(0.2)),
                ]);
            }
            members.push(ConvexBody::polygon(&convex_hull(&pts))?);
        }
    }
    Family::new(2, members)
}

/// `n` lines in general position with a box containing every crossing.
pub fn generic_lines(seed: u64, n: usize) -> Result<(Vec<Halfspace>, ConvexBody), GeometryError> {
    let mut r = rng(seed);
    let mut lines = Vec::with_capacity(n);
    for i in 0..n {
        // distinct directions spread over a half turn
        let a = std::f64::consts::PI * (i as f64 + 0.2 + 0.6 * r.random::<f64>()) / n.max(1) as f64;
        let off = 2.0 * r.random::<f64>() - 1.0;
        lines.push(Halfspace::new(vec![a.cos(), a.sin()], off)?);
    }
    let mut reach: f64 = 2.0;
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (&lines[i], &lines[j]);
            let det = p.normal[0] * q.normal[1] - p.normal[1] * q.normal[0];
            let x = (p.offset * q.normal[1] - q.offset * p.normal[1]) / det;
            let y = (p.normal[0] * q.offset - q.normal[0] * p.offset) / det;
            reach = reach.max(x.abs()).max(y.abs());
        }
    }
    let bbox = ConvexBody::cube(2, -(reach + 1.0), 2.0 * (reach + 1.0));
    Ok((lines, bbox))
}

/// The family scaled by `factor` about the origin; boxes stay boxes.
pub fn scale_family(family: &Family, factor: f64) -> Result<Family, GeometryError> {
    let d = family.dim();
    family.map_members(|b| match b.kind() {
        BodyKind::Box { min, max } => ConvexBody::boxed(
            min.iter().map(|x| x * factor).collect(),
            max.iter().map(|x| x * factor).collect(),
        ),
        _ => {
            let m: Vec<Vec<f64>> = (0..d)
                .map(|i| (0..d).map(|j| if i == j { factor } else { 0.0 }).collect())
                .collect();
            b.affine_image(&m, &vec![0.0; d])
        }
    })
}
