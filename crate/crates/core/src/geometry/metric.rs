use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use super::body::{to_matrix, BodyKind, ConvexBody, TangentConfig, GEOM_TOL};
use super::halfspace::{dist, norm, Point};
use super::hull::{convex_hull, polygon_diameter, P2};
use super::volume::{axis_box, clipped_vertices};
use super::GeometryError;
use crate::lp::{LinearProgram, LpError, Relation, Sense};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn to_body(&self) -> ConvexBody {
        ConvexBody::ball(self.center.clone(), self.radius).expect("valid ball")
    }
}

/// Vertices of a polytope-like body after clipping to `[-R, R]^d`. Balls
/// and ellipsoids use their circumscribed tangent polytope.
pub fn vertices(body: &ConvexBody, clip_radius: f64) -> Result<Vec<Point>, GeometryError> {
    let d = body.dim();
    if let BodyKind::Box { min, max } = body.kind() {
        let mut out = Vec::with_capacity(1 << d);
        for mask in 0..(1usize << d) {
            out.push(
                (0..d)
                    .map(|i| if mask >> i & 1 == 1 { max[i] } else { min[i] })
                    .collect(),
            );
        }
        return Ok(out);
    }
    let hs = body.to_halfspaces(&TangentConfig::default());
    let c = clipped_vertices(d, &hs, clip_radius);
    if c.points.is_empty() {
        return Err(GeometryError::EmptyBody);
    }
    if c.touches {
        return Err(GeometryError::Unbounded);
    }
    Ok(c.points)
}

pub fn point_set_diameter(points: &[Point]) -> f64 {
    if points.first().map(Vec::len) == Some(2) {
        let p2: Vec<P2> = points.iter().map(|p| [p[0], p[1]]).collect();
        return polygon_diameter(&convex_hull(&p2));
    }
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.max(dist(&points[i], &points[j]));
        }
    }
    best
}

/// Largest distance between two points of the body.
pub fn diameter(body: &ConvexBody, clip_radius: f64) -> Result<f64, GeometryError> {
    match body.kind() {
        BodyKind::Ball { radius, .. } => Ok(2.0 * radius),
        BodyKind::Ellipsoid { shape, .. } => {
            let eig = SymmetricEigen::new(to_matrix(shape));
            Ok(2.0 * eig.eigenvalues.max().max(0.0).sqrt())
        }
        BodyKind::Halfspace(_) => Err(GeometryError::Unbounded),
        BodyKind::Box { min, max } => Ok(dist(min, max)),
        BodyKind::HPolytope { halfspaces } => {
            if let Some(b) = axis_box(body.dim(), halfspaces) {
                if b.lo.iter().zip(&b.hi).any(|(l, h)| *l > h + GEOM_TOL) {
                    return Err(GeometryError::EmptyBody);
                }
                if b.lo.iter().chain(&b.hi).any(|v| v.abs() >= clip_radius) {
                    return Err(GeometryError::Unbounded);
                }
                let ext: Vec<f64> =
                    b.lo.iter()
                        .zip(&b.hi)
                        .map(|(l, h)| (h - l).max(0.0))
                        .collect();
                return Ok(norm(&ext));
            }
            Ok(point_set_diameter(&vertices(body, clip_radius)?))
        }
    }
}

/// Largest inscribed ball, by linear programming over `(center, r)`.
pub fn chebyshev_ball(body: &ConvexBody) -> Result<Ball, GeometryError> {
    let d = body.dim();
    match body.kind() {
        BodyKind::Ball { center, radius } => {
            if *radius <= GEOM_TOL {
                return Err(GeometryError::EmptyInterior);
            }
            return Ok(Ball {
                center: center.clone(),
                radius: *radius,
            });
        }
        BodyKind::Box { min, max } => {
            let r = min
                .iter()
                .zip(max)
                .map(|(a, b)| (b - a) / 2.0)
                .fold(f64::INFINITY, f64::min);
            if r <= GEOM_TOL {
                return Err(GeometryError::EmptyInterior);
            }
            return Ok(Ball {
                center: min.iter().zip(max).map(|(a, b)| (a + b) / 2.0).collect(),
                radius: r,
            });
        }
        BodyKind::Halfspace(_) => return Err(GeometryError::Unbounded),
        _ => {}
    }
    let hs = body.to_halfspaces(&TangentConfig::default());
    let mut obj = vec![0.0; d + 1];
    obj[d] = 1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, obj);
    for i in 0..d {
        lp.set_free(i);
    }
    for h in &hs {
        let n = norm(&h.normal);
        let mut row: Vec<f64> = h.normal.iter().map(|v| v / n).collect();
        row.push(1.0);
        lp.add(row, Relation::Le, h.offset / n)?;
    }
    match lp.solve() {
        Ok(sol) => {
            let r = sol.x[d];
            if r <= GEOM_TOL {
                return Err(GeometryError::EmptyInterior);
            }
            Ok(Ball {
                center: sol.x[..d].to_vec(),
                radius: r,
            })
        }
        Err(LpError::Unbounded) => Err(GeometryError::Unbounded),
        Err(LpError::Infeasible) => Err(GeometryError::EmptyBody),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Halfspace;

    #[test]
    fn simple_diameters() {
        let sq = ConvexBody::cube(2, 0.0, 1.0);
        assert!((diameter(&sq, 1e6).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let b = ConvexBody::ball(vec![0.0, 0.0], 3.0).unwrap();
        assert_eq!(diameter(&b, 1e6).unwrap(), 6.0);
        let e =
            ConvexBody::ellipsoid(vec![0.0, 0.0], vec![vec![9.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((diameter(&e, 1e6).unwrap() - 6.0).abs() < 1e-12);
        let hp = ConvexBody::hpolytope(2, vec![Halfspace::axis_upper(2, 0, 0.0)]).unwrap();
        assert_eq!(diameter(&hp, 1e6), Err(GeometryError::Unbounded));
    }

    #[test]
    fn chebyshev_of_right_triangle() {
        let t = ConvexBody::polygon(&[[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]).unwrap();
        let b = chebyshev_ball(&t).unwrap();
        assert!((b.radius - 1.0).abs() < 1e-9);
        assert!(dist(&b.center, &[1.0, 1.0]) < 1e-9);
    }

    #[test]
    fn flat_box_has_empty_interior() {
        let flat = ConvexBody::boxed(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert_eq!(chebyshev_ball(&flat), Err(GeometryError::EmptyInterior));
        let as_poly = crate::geometry::intersect(&[flat]).unwrap();
        assert_eq!(chebyshev_ball(&as_poly), Err(GeometryError::EmptyInterior));
    }
}
