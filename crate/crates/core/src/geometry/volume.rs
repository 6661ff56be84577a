use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::body::{to_matrix, BodyKind, ConvexBody, TangentConfig, GEOM_TOL};
use super::halfspace::{dot, norm, Halfspace, Point};
use super::hull::{convex_hull, signed_area, P2};
use super::{GeometryError, VolumeValue};
use crate::lp::{LinearProgram, LpError, Relation, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeMode {
    /// Vertex enumeration; `d <= 3` only.
    Exact,
    /// Uniform sampling in the clipped bounding box.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Common refinement of the inputs as one halfspace list.
pub fn intersect(bodies: &[ConvexBody]) -> Result<ConvexBody, GeometryError> {
    intersect_with(bodies, &TangentConfig::default())
}

pub fn intersect_with(
    bodies: &[ConvexBody],
    tangents: &TangentConfig,
) -> Result<ConvexBody, GeometryError> {
    let first = bodies.first().ok_or(GeometryError::EmptyList)?;
    let dim = first.dim();
    let mut hs = Vec::new();
    for b in bodies {
        if b.dim() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
        hs.extend(b.to_halfspaces(tangents));
    }
    ConvexBody::hpolytope(dim, hs)
}

pub fn unit_ball_volume(d: usize) -> f64 {
    let mut v = [1.0, 2.0];
    for k in 2..=d {
        v[k % 2] *= std::f64::consts::TAU / k as f64;
    }
    v[d % 2]
}

pub fn volume(
    body: &ConvexBody,
    mode: VolumeMode,
    clip_radius: f64,
) -> Result<VolumeValue, GeometryError> {
    if !(clip_radius > 0.0) || !clip_radius.is_finite() {
        return Err(GeometryError::NonPositiveClipRadius(clip_radius));
    }
    let d = body.dim();
    if let VolumeMode::MonteCarlo { samples: 0, .. } = mode {
        return Err(GeometryError::NoSamples);
    }
    if mode == VolumeMode::Exact && d > 3 {
        return Err(GeometryError::ExactDimensionUnsupported(d));
    }
    match (body.kind(), mode) {
        (BodyKind::Ball { radius, center }, VolumeMode::Exact) => {
            if center.iter().any(|c| c.abs() + radius >= clip_radius) {
                return Ok(VolumeValue::INFINITE);
            }
            Ok(VolumeValue::finite(
                unit_ball_volume(d) * radius.powi(d as i32),
            ))
        }
        (BodyKind::Ellipsoid { shape, center }, VolumeMode::Exact) => {
            let m = to_matrix(shape);
            let reach = (0..d)
                .map(|i| center[i].abs() + m[(i, i)].sqrt())
                .fold(0.0, f64::max);
            if reach >= clip_radius {
                return Ok(VolumeValue::INFINITE);
            }
            Ok(VolumeValue::finite(
                unit_ball_volume(d) * m.determinant().max(0.0).sqrt(),
            ))
        }
        (_, VolumeMode::Exact) => volume_exact(
            d,
            &body.to_halfspaces(&TangentConfig::default()),
            clip_radius,
        ),
        (_, VolumeMode::MonteCarlo { samples, seed }) => {
            let hs = body.to_halfspaces(&TangentConfig::default());
            monte_carlo(body, d, &hs, samples, seed, clip_radius)
        }
    }
}

/// Exact clipped volume of `{x : h(x) <= 0 for all h}` in `d <= 3`.
pub fn volume_exact(
    dim: usize,
    hs: &[Halfspace],
    clip_radius: f64,
) -> Result<VolumeValue, GeometryError> {
    if !(clip_radius > 0.0) {
        return Err(GeometryError::NonPositiveClipRadius(clip_radius));
    }
    if let Some(b) = axis_box(dim, hs) {
        return Ok(b.volume(clip_radius));
    }
    match dim {
        1 => {
            let b = interval_bounds(hs);
            Ok(AxisBox {
                lo: vec![b.0],
                hi: vec![b.1],
            }
            .volume(clip_radius))
        }
        2 => {
            let c = clip_polygon(hs, clip_radius);
            if c.points.is_empty() {
                Ok(VolumeValue::EMPTY)
            } else if c.touches {
                Ok(VolumeValue::INFINITE)
            } else {
                Ok(VolumeValue::finite(signed_area(&c.points).abs()))
            }
        }
        3 => {
            let c = clipped_vertices(3, hs, clip_radius);
            if c.points.is_empty() {
                Ok(VolumeValue::EMPTY)
            } else if c.touches {
                Ok(VolumeValue::INFINITE)
            } else {
                Ok(VolumeValue::finite(polytope_volume_3d(
                    &c.points, &c.planes,
                )))
            }
        }
        _ => Err(GeometryError::ExactDimensionUnsupported(dim)),
    }
}

fn interval_bounds(hs: &[Halfspace]) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for h in hs {
        let a = h.normal[0];
        if a > 0.0 {
            hi = hi.min(h.offset / a);
        } else {
            lo = lo.max(h.offset / a);
        }
    }
    (lo, hi)
}

/// Bounds of an intersection of axis-parallel halfspaces.
#[derive(Debug, Clone)]
pub(crate) struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn volume(&self, r: f64) -> VolumeValue {
        let mut v = 1.0;
        let mut infinite = false;
        for (&l, &h) in self.lo.iter().zip(&self.hi) {
            if l > h + GEOM_TOL * (1.0 + l.abs().max(h.abs())) {
                return VolumeValue::EMPTY;
            }
            if l <= -r || h >= r {
                infinite = true;
            }
            v *= (h - l).max(0.0);
        }
        if infinite {
            VolumeValue::INFINITE
        } else {
            VolumeValue::finite(v)
        }
    }
}

pub(crate) fn axis_box(dim: usize, hs: &[Halfspace]) -> Option<AxisBox> {
    let mut lo = vec![f64::NEG_INFINITY; dim];
    let mut hi = vec![f64::INFINITY; dim];
    for h in hs {
        let (axis, upper, bound) = h.axis_aligned()?;
        if upper {
            hi[axis] = hi[axis].min(bound);
        } else {
            lo[axis] = lo[axis].max(bound);
        }
    }
    Some(AxisBox { lo, hi })
}

/// Vertices of the clipped polygon, with a flag set when the clip box
/// contributes to the boundary.
pub(crate) struct Clipped<T> {
    pub points: Vec<T>,
    pub touches: bool,
    pub planes: Vec<Halfspace>,
}

#[derive(Clone, Copy)]
struct Line {
    a: P2,
    b: f64,
}

fn line_meet(l1: Line, l2: Line) -> Option<P2> {
    let det = l1.a[0] * l2.a[1] - l1.a[1] * l2.a[0];
    if det.abs() < 1e-14 {
        return None;
    }
    Some([
        (l1.b * l2.a[1] - l2.b * l1.a[1]) / det,
        (l1.a[0] * l2.b - l2.a[0] * l1.b) / det,
    ])
}

/// Sutherland-Hodgman clip of `[-r, r]^2` by every halfplane. Each edge
/// remembers its supporting line so new vertices come from a 2x2 solve
/// rather than interpolation along long clip-box edges.
pub(crate) fn clip_polygon(hs: &[Halfspace], r: f64) -> Clipped<P2> {
    let box_lines = [
        Line {
            a: [0.0, -1.0],
            b: r,
        },
        Line {
            a: [1.0, 0.0],
            b: r,
        },
        Line {
            a: [0.0, 1.0],
            b: r,
        },
        Line {
            a: [-1.0, 0.0],
            b: r,
        },
    ];
    let mut verts: Vec<P2> = vec![[-r, -r], [r, -r], [r, r], [-r, r]];
    let mut edges: Vec<Line> = box_lines.to_vec();
    for h in hs {
        let n = norm(&h.normal);
        let l = Line {
            a: [h.normal[0] / n, h.normal[1] / n],
            b: h.offset / n,
        };
        let k = verts.len();
        if k == 0 {
            break;
        }
        let s: Vec<f64> = verts
            .iter()
            .map(|v| l.a[0] * v[0] + l.a[1] * v[1] - l.b)
            .collect();
        let inside: Vec<bool> = verts
            .iter()
            .zip(&s)
            .map(|(v, &si)| si <= GEOM_TOL * (1.0 + v[0].abs().max(v[1].abs())))
            .collect();
        if inside.iter().all(|&x| x) {
            continue;
        }
        let mut nv = Vec::with_capacity(k + 1);
        let mut ne = Vec::with_capacity(k + 1);
        for i in 0..k {
            let j = (i + 1) % k;
            let crossing = || {
                line_meet(edges[i], l).unwrap_or_else(|| {
                    let t = s[i] / (s[i] - s[j]);
                    [
                        verts[i][0] + t * (verts[j][0] - verts[i][0]),
                        verts[i][1] + t * (verts[j][1] - verts[i][1]),
                    ]
                })
            };
            match (inside[i], inside[j]) {
                (true, true) => {
                    nv.push(verts[i]);
                    ne.push(edges[i]);
                }
                (true, false) => {
                    nv.push(verts[i]);
                    ne.push(edges[i]);
                    nv.push(crossing());
                    ne.push(l);
                }
                (false, true) => {
                    nv.push(crossing());
                    ne.push(edges[i]);
                }
                (false, false) => {}
            }
        }
        verts = nv;
        edges = ne;
    }
    let lim = r * (1.0 - 1e-9);
    let touches = verts.iter().any(|v| v[0].abs() >= lim || v[1].abs() >= lim);
    Clipped {
        points: verts,
        touches,
        planes: Vec::new(),
    }
}

fn clip_planes(dim: usize, r: f64) -> Vec<Halfspace> {
    (0..dim)
        .flat_map(|i| {
            [
                Halfspace::axis_upper(dim, i, r),
                Halfspace::axis_lower(dim, i, -r),
            ]
        })
        .collect()
}

fn feasible_with_tol(planes: &[Halfspace], x: &[f64]) -> bool {
    let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    planes.iter().all(|h| h.eval(x) <= GEOM_TOL * scale)
}

/// Vertex enumeration of the clipped polytope for any dimension `>= 2`.
/// Planes are returned normalized and deduplicated.
pub(crate) fn clipped_vertices(dim: usize, hs: &[Halfspace], r: f64) -> Clipped<Point> {
    if dim == 2 {
        let c = clip_polygon(hs, r);
        return Clipped {
            points: c.points.iter().map(|p| p.to_vec()).collect(),
            touches: c.touches,
            planes: Vec::new(),
        };
    }
    let mut planes: Vec<Halfspace> = Vec::with_capacity(hs.len() + 2 * dim);
    for h in hs
        .iter()
        .map(Halfspace::normalized)
        .chain(clip_planes(dim, r))
    {
        let dup = planes.iter().any(|p| {
            (p.offset - h.offset).abs() <= 1e-12 * (1.0 + h.offset.abs())
                && p.normal
                    .iter()
                    .zip(&h.normal)
                    .all(|(a, b)| (a - b).abs() <= 1e-12)
        });
        if !dup {
            planes.push(h);
        }
    }
    let m = planes.len();
    let mut points: Vec<Point> = Vec::new();
    let push = |x: Point, points: &mut Vec<Point>| {
        let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if !points
            .iter()
            .any(|p| p.iter().zip(&x).all(|(a, b)| (a - b).abs() <= 1e-9 * scale))
        {
            points.push(x);
        }
    };
    if dim == 3 {
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let a = Matrix3::new(
                        planes[i].normal[0],
                        planes[i].normal[1],
                        planes[i].normal[2],
                        planes[j].normal[0],
                        planes[j].normal[1],
                        planes[j].normal[2],
                        planes[k].normal[0],
                        planes[k].normal[1],
                        planes[k].normal[2],
                    );
                    if a.determinant().abs() < 1e-12 {
                        continue;
                    }
                    let b = Vector3::new(planes[i].offset, planes[j].offset, planes[k].offset);
                    if let Some(x) = a.lu().solve(&b) {
                        let x = vec![x[0], x[1], x[2]];
                        if feasible_with_tol(&planes, &x) {
                            push(x, &mut points);
                        }
                    }
                }
            }
        }
    } else {
        let mut idx: Vec<usize> = (0..dim).collect();
        if m >= dim {
            loop {
                let a = DMatrix::from_fn(dim, dim, |r, c| planes[idx[r]].normal[c]);
                let b = DVector::from_fn(dim, |r, _| planes[idx[r]].offset);
                if a.determinant().abs() >= 1e-12 {
                    if let Some(x) = a.lu().solve(&b) {
                        let x: Point = x.iter().copied().collect();
                        if feasible_with_tol(&planes, &x) {
                            push(x, &mut points);
                        }
                    }
                }
                // next combination
                let mut pos = dim;
                while pos > 0 && idx[pos - 1] == m - dim + pos - 1 {
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
                idx[pos - 1] += 1;
                for q in pos..dim {
                    idx[q] = idx[q - 1] + 1;
                }
            }
        }
    }
    let lim = r * (1.0 - 1e-9);
    let touches = points.iter().any(|p| p.iter().any(|v| v.abs() >= lim));
    Clipped {
        points,
        touches,
        planes,
    }
}

/// Volume of a 3-polytope from its vertices and a superset of its facet
/// planes (unit normals): sum of facet-area * height / 3 about the centroid.
fn polytope_volume_3d(points: &[Point], planes: &[Halfspace]) -> f64 {
    if points.len() < 4 {
        return 0.0;
    }
    let n = points.len() as f64;
    let c: Vec<f64> = (0..3)
        .map(|i| points.iter().map(|p| p[i]).sum::<f64>() / n)
        .collect();
    let scale = 1.0 + points.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut vol = 0.0;
    for h in planes {
        let on: Vec<&Point> = points
            .iter()
            .filter(|p| h.eval(p).abs() <= 1e-8 * scale)
            .collect();
        if on.len() < 3 {
            continue;
        }
        let (u, w) = plane_basis(&h.normal);
        let flat: Vec<P2> = on.iter().map(|p| [dot(p, &u), dot(p, &w)]).collect();
        let area = signed_area(&convex_hull(&flat)).abs();
        let height = -h.eval(&c);
        vol += area * height.max(0.0) / 3.0;
    }
    vol
}

fn plane_basis(n: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let nv = Vector3::new(n[0], n[1], n[2]);
    let u = nv.cross(&Vector3::from(pick)).normalize();
    let w = nv.cross(&u).normalize();
    (vec![u[0], u[1], u[2]], vec![w[0], w[1], w[2]])
}

fn lp_with_clip(
    dim: usize,
    hs: &[Halfspace],
    objective: Vec<f64>,
    sense: Sense,
    r: f64,
) -> Result<crate::lp::LpSolution, LpError> {
    let mut lp = LinearProgram::new(sense, objective);
    for i in 0..dim {
        lp.set_free(i);
    }
    for h in hs.iter().map(Halfspace::normalized) {
        lp.add(h.normal, Relation::Le, h.offset)?;
    }
    if r.is_finite() {
        for h in clip_planes(dim, r) {
            lp.add(h.normal, Relation::Le, h.offset)?;
        }
    }
    lp.solve()
}

/// Range of coordinate `axis` over the clipped polytope, `None` if empty.
pub fn axis_extent(dim: usize, hs: &[Halfspace], axis: usize, r: f64) -> Option<(f64, f64)> {
    if let Some(b) = axis_box(dim, hs) {
        let empty =
            b.lo.iter()
                .zip(&b.hi)
                .any(|(l, h)| *l > h + GEOM_TOL * (1.0 + l.abs().max(h.abs())));
        if empty {
            return None;
        }
        return Some((
            b.lo[axis].max(-r),
            b.hi[axis].min(r).max(b.lo[axis].max(-r)),
        ));
    }
    if dim == 2 {
        let c = clip_polygon(hs, r);
        if c.points.is_empty() {
            return None;
        }
        let lo = c
            .points
            .iter()
            .map(|p| p[axis])
            .fold(f64::INFINITY, f64::min);
        let hi = c
            .points
            .iter()
            .map(|p| p[axis])
            .fold(f64::NEG_INFINITY, f64::max);
        return Some((lo, hi));
    }
    let mut e = vec![0.0; dim];
    e[axis] = 1.0;
    let hi = lp_with_clip(dim, hs, e.clone(), Sense::Maximize, r)
        .ok()?
        .objective;
    let lo = lp_with_clip(dim, hs, e, Sense::Minimize, r).ok()?.objective;
    Some((lo, hi))
}

/// `sup { u . x }` over the polytope: `INFINITY` if unbounded,
/// `NEG_INFINITY` if empty.
pub fn polytope_support(dim: usize, hs: &[Halfspace], u: &[f64]) -> f64 {
    match lp_with_clip(dim, hs, u.to_vec(), Sense::Maximize, f64::INFINITY) {
        Ok(s) => s.objective,
        Err(LpError::Unbounded) => f64::INFINITY,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Nonemptiness of the polytope (tolerance of the LP solver).
pub fn is_feasible(dim: usize, hs: &[Halfspace]) -> bool {
    lp_with_clip(dim, hs, vec![0.0; dim], Sense::Minimize, f64::INFINITY).is_ok()
}

fn monte_carlo(
    body: &ConvexBody,
    dim: usize,
    hs: &[Halfspace],
    samples: usize,
    seed: u64,
    r: f64,
) -> Result<VolumeValue, GeometryError> {
    let mut lo = vec![0.0; dim];
    let mut hi = vec![0.0; dim];
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        match lp_with_clip(dim, hs, e.clone(), Sense::Maximize, r) {
            Ok(s) => hi[i] = s.objective,
            Err(LpError::Infeasible) => return Ok(VolumeValue::EMPTY),
            Err(e) => return Err(e.into()),
        }
        lo[i] = lp_with_clip(dim, hs, e, Sense::Minimize, r)?.objective;
        let lim = r * (1.0 - 1e-9);
        if hi[i] >= lim || lo[i] <= -lim {
            return Ok(VolumeValue::INFINITE);
        }
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(l, h)| (h - l).max(0.0)).product();
    if box_vol == 0.0 {
        return Ok(VolumeValue {
            kind: super::VolumeKind::Finite(0.0),
            stderr: Some(0.0),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; dim];
    let mut hits = 0usize;
    for _ in 0..samples {
        for i in 0..dim {
            x[i] = rng.random_range(lo[i]..=hi[i]);
        }
        if body.contains_point(&x, 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(VolumeValue {
        kind: super::VolumeKind::Finite(box_vol * p),
        stderr: Some(box_vol * (p * (1.0 - p) / samples as f64).sqrt()),
    })
}
