use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::body::{to_matrix, BodyKind, ConvexBody};
use super::ellipsoid::max_inscribed_ellipsoid;
use super::halfspace::{dot, Halfspace, Point};
use super::hull::{convex_hull, cross, signed_area, P2};
use super::metric::vertices;
use super::GeometryError;

/// A simplex containing a body, with its volume and the volume ratio to
/// the body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnclosingSimplex {
    pub simplex: ConvexBody,
    pub vertices: Vec<Point>,
    pub volume: f64,
    pub ratio: f64,
}

/// Vertices of a regular simplex centered at the origin with circumradius 1.
pub fn regular_simplex(d: usize) -> Vec<Point> {
    let k = d + 1;
    let centered: Vec<DVector<f64>> = (0..k)
        .map(|i| DVector::from_fn(k, |j, _| if i == j { 1.0 } else { 0.0 } - 1.0 / k as f64))
        .collect();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d);
    for v in centered.iter().take(d) {
        let mut w = v.clone();
        for b in &basis {
            w -= b * b.dot(v);
        }
        basis.push(w.normalize());
    }
    let r = centered[0].norm();
    centered
        .iter()
        .map(|p| basis.iter().map(|b| b.dot(p) / r).collect())
        .collect()
}

/// Volume of the simplex with the given `d + 1` vertices.
pub fn simplex_volume(verts: &[Point]) -> f64 {
    let d = verts.len() - 1;
    let m = DMatrix::from_fn(d, d, |i, j| verts[i + 1][j] - verts[0][j]);
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    m.determinant().abs() / fact
}

/// Facet halfspaces of a full-dimensional simplex.
pub fn simplex_halfspaces(verts: &[Point]) -> Result<Vec<Halfspace>, GeometryError> {
    let d = verts.len() - 1;
    let centroid: Point = (0..d)
        .map(|j| verts.iter().map(|v| v[j]).sum::<f64>() / (d + 1) as f64)
        .collect();
    let mut out = Vec::with_capacity(d + 1);
    for skip in 0..=d {
        let pts: Vec<&Point> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, v)| v)
            .collect();
        // normal = null vector of the facet's edge matrix
        let m = DMatrix::from_fn(d.saturating_sub(1).max(1), d, |i, j| {
            if d == 1 {
                0.0
            } else {
                pts[i + 1][j] - pts[0][j]
            }
        });
        let normal: Vec<f64> = if d == 1 {
            vec![1.0]
        } else {
            let eig = SymmetricEigen::new(m.transpose() * &m);
            let (idx, _) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .expect("nonempty");
            eig.eigenvectors.column(idx).iter().copied().collect()
        };
        let mut h = Halfspace::new(normal, 0.0)?;
        h.offset = dot(&h.normal, pts[0]);
        if h.eval(&centroid) > 0.0 {
            h = h.flipped();
        }
        out.push(h);
    }
    Ok(out)
}

/// Smallest-area enclosing triangle in the plane (every side touches the
/// polygon at its midpoint, one side flush with an edge). In 3-space a
/// regular simplex circumscribed about the body in the frame of its
/// inscribed ellipsoid is returned instead, with no optimality claim.
pub fn min_enclosing_simplex(
    body: &ConvexBody,
    clip_radius: f64,
) -> Result<EnclosingSimplex, GeometryError> {
    let d = body.dim();
    let pts = vertices(body, clip_radius)?;
    match d {
        1 => {
            let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            let simplex = ConvexBody::boxed(vec![lo], vec![hi])?;
            Ok(EnclosingSimplex {
                simplex,
                vertices: vec![vec![lo], vec![hi]],
                volume: hi - lo,
                ratio: 1.0,
            })
        }
        2 => {
            let p2: Vec<P2> = pts.iter().map(|p| [p[0], p[1]]).collect();
            let hull = convex_hull(&p2);
            let area = signed_area(&hull);
            if hull.len() < 3 || area <= 1e-12 {
                return Err(GeometryError::EmptyInterior);
            }
            let tri = min_triangle(&hull).ok_or(GeometryError::NonConvergence(0))?;
            let simplex = ConvexBody::polygon(&tri)?;
            let tri_area = signed_area(&tri).abs();
            Ok(EnclosingSimplex {
                simplex,
                vertices: tri.iter().map(|p| p.to_vec()).collect(),
                volume: tri_area,
                ratio: tri_area / area,
            })
        }
        _ => {
            let e = max_inscribed_ellipsoid(body, 1e-9)?;
            let BodyKind::Ellipsoid { center, shape } = e.kind() else {
                unreachable!("inscribed ellipsoid is an ellipsoid")
            };
            let eig = SymmetricEigen::new(to_matrix(shape));
            let sqrt_a = &eig.eigenvectors
                * DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()))
                * eig.eigenvectors.transpose();
            let inv_sqrt = sqrt_a
                .clone()
                .try_inverse()
                .ok_or(GeometryError::EmptyInterior)?;
            let c = DVector::from_column_slice(center);
            let rho = pts
                .iter()
                .map(|p| (&inv_sqrt * (DVector::from_column_slice(p) - &c)).norm())
                .fold(0.0, f64::max)
                * (1.0 + 1e-9);
            let verts: Vec<Point> = regular_simplex(d)
                .iter()
                .map(|w| {
                    let y = DVector::from_column_slice(w) * (d as f64 * rho);
                    (&c + &sqrt_a * y).iter().copied().collect()
                })
                .collect();
            let simplex = ConvexBody::hpolytope(d, simplex_halfspaces(&verts)?)?;
            let vol = simplex_volume(&verts);
            let body_vol = super::volume::volume(body, super::VolumeMode::Exact, clip_radius)
                .map(|v| v.size())
                .unwrap_or(f64::NAN);
            log::debug!("enclosing simplex volume ratio {}", vol / body_vol);
            Ok(EnclosingSimplex {
                simplex,
                vertices: verts,
                volume: vol,
                ratio: vol / body_vol,
            })
        }
    }
}

/// Support line `{x : n . x <= b}` with unit normal.
#[derive(Debug, Clone, Copy)]
struct SLine {
    n: P2,
    b: f64,
}

fn meet(l1: SLine, l2: SLine) -> Option<P2> {
    let det = l1.n[0] * l2.n[1] - l1.n[1] * l2.n[0];
    if det.abs() < 1e-12 {
        return None;
    }
    Some([
        (l1.b * l2.n[1] - l2.b * l1.n[1]) / det,
        (l1.n[0] * l2.b - l2.n[0] * l1.b) / det,
    ])
}

fn edge_line(hull: &[P2], i: usize) -> SLine {
    let p = hull[i];
    let q = hull[(i + 1) % hull.len()];
    let n = [q[1] - p[1], p[0] - q[0]];
    let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
    let n = [n[0] / len, n[1] / len];
    SLine {
        n,
        b: n[0] * p[0] + n[1] * p[1],
    }
}

fn triangle_area(l1: SLine, l2: SLine, l3: SLine) -> Option<(f64, [P2; 3])> {
    let a = meet(l1, l2)?;
    let b = meet(l2, l3)?;
    let c = meet(l3, l1)?;
    Some((signed_area(&[a, b, c]).abs(), [a, b, c]))
}

/// Best third side given two support lines: the smallest triangle cut
/// from the wedge at `l1 ∩ l2` by a support line of the hull.
fn best_third(hull: &[P2], l1: SLine, l2: SLine) -> Option<(f64, SLine)> {
    let o = meet(l1, l2)?;
    // rays along each line, pointing away from the other line
    let mut u1 = [-l1.n[1], l1.n[0]];
    if u1[0] * l2.n[0] + u1[1] * l2.n[1] > 0.0 {
        u1 = [-u1[0], -u1[1]];
    }
    let mut u2 = [-l2.n[1], l2.n[0]];
    if u2[0] * l1.n[0] + u2[1] * l1.n[1] > 0.0 {
        u2 = [-u2[0], -u2[1]];
    }
    let det = u1[0] * u2[1] - u1[1] * u2[0];
    if det.abs() < 1e-12 {
        return None;
    }
    let coords: Vec<(f64, f64)> = hull
        .iter()
        .map(|p| {
            let w = [p[0] - o[0], p[1] - o[1]];
            (
                (w[0] * u2[1] - w[1] * u2[0]) / det,
                (u1[0] * w[1] - u1[1] * w[0]) / det,
            )
        })
        .collect();
    let scale = hull
        .iter()
        .fold(1.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()));
    let tol = 1e-9;
    let line_from = |a: f64, b: f64| -> SLine {
        // line through o + a u1 and o + b u2, oriented away from o
        let p = [o[0] + a * u1[0], o[1] + a * u1[1]];
        let q = [o[0] + b * u2[0], o[1] + b * u2[1]];
        let mut n = [q[1] - p[1], p[0] - q[0]];
        let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
        n = [n[0] / len, n[1] / len];
        let mut l = SLine {
            n,
            b: n[0] * p[0] + n[1] * p[1],
        };
        if l.n[0] * o[0] + l.n[1] * o[1] > l.b {
            l = SLine {
                n: [-n[0], -n[1]],
                b: -l.b,
            };
        }
        l
    };
    let mut best: Option<(f64, SLine)> = None;
    let mut consider = |area: f64, l: SLine| {
        if best.is_none_or(|(a, _)| area < a) {
            best = Some((area, l));
        }
    };
    let wedge = det.abs();
    for &(a, b) in &coords {
        if a <= tol * scale || b <= tol * scale {
            continue;
        }
        let (ta, tb) = (2.0 * a, 2.0 * b);
        if coords.iter().all(|&(x, y)| x / ta + y / tb <= 1.0 + tol) {
            consider(0.5 * ta * tb * wedge, line_from(ta, tb));
        }
    }
    for i in 0..hull.len() {
        let l = edge_line(hull, i);
        let on1 = l.n[0] * u1[0] + l.n[1] * u1[1];
        let on2 = l.n[0] * u2[0] + l.n[1] * u2[1];
        let gap = l.b - (l.n[0] * o[0] + l.n[1] * o[1]);
        if gap <= 0.0 || on1 <= 0.0 || on2 <= 0.0 {
            continue;
        }
        consider(0.5 * (gap / on1) * (gap / on2) * wedge, l);
    }
    best
}

fn min_triangle(hull: &[P2]) -> Option<[P2; 3]> {
    let n = hull.len();
    let mut best: Option<(f64, [P2; 3])> = None;
    for i in 0..n {
        let l1 = edge_line(hull, i);
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut l2 = edge_line(hull, j);
            if (l1.n[0] * l2.n[1] - l1.n[1] * l2.n[0]).abs() <= 1e-12 {
                continue;
            }
            let Some((mut area, mut l3)) = best_third(hull, l1, l2) else {
                continue;
            };
            for _ in 0..100 {
                let Some((a2, nl2)) = best_third(hull, l1, l3) else {
                    break;
                };
                l2 = nl2;
                let Some((a3, nl3)) = best_third(hull, l1, l2) else {
                    break;
                };
                l3 = nl3;
                let next = a2.min(a3);
                if next >= area * (1.0 - 1e-13) {
                    break;
                }
                area = next;
            }
            if let Some((a, tri)) = triangle_area(l1, l2, l3) {
                if best.is_none_or(|(b, _)| a < b) {
                    best = Some((a, tri));
                }
            }
        }
    }
    best.map(|(_, mut t)| {
        if cross(t[0], t[1], t[2]) < 0.0 {
            t.swap(1, 2);
        }
        t
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_simplex_is_regular() {
        for d in 1..5 {
            let v = regular_simplex(d);
            assert_eq!(v.len(), d + 1);
            let e = super::super::dist(&v[0], &v[1]);
            for a in 0..=d {
                assert!((super::super::norm(&v[a]) - 1.0).abs() < 1e-12);
                for b in a + 1..=d {
                    assert!((super::super::dist(&v[a], &v[b]) - e).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn square_needs_area_two() {
        let s = min_enclosing_simplex(&ConvexBody::cube(2, 0.0, 1.0), 1e6).unwrap();
        assert!((s.volume - 2.0).abs() < 1e-9, "{}", s.volume);
    }

    #[test]
    fn triangle_is_its_own_enclosure() {
        let t = ConvexBody::polygon(&[[0.0, 0.0], [3.0, 0.5], [1.0, 2.0]]).unwrap();
        let s = min_enclosing_simplex(&t, 1e6).unwrap();
        assert!((s.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cube_simplex_contains_cube() {
        let c = ConvexBody::cube(3, -1.0, 2.0);
        let s = min_enclosing_simplex(&c, 1e6).unwrap();
        for v in vertices(&c, 1e6).unwrap() {
            assert!(s.simplex.contains_point(&v, 1e-7));
        }
        assert!(s.ratio >= 1.0);
    }
}
