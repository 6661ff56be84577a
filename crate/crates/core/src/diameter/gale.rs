use serde::{Deserialize, Serialize};

use crate::geometry::{
    diameter, dist, regular_simplex, simplex_halfspaces, vertices, Ball, BodyKind, ConvexBody,
    GeometryError, Point,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaleSimplex {
    pub simplex: ConvexBody,
    pub vertices: Vec<Point>,
    /// Ball around the body that the simplex is circumscribed about.
    pub ball: Ball,
    /// Simplex diameter over body diameter.
    pub ratio: f64,
}

/// Regular simplex whose inscribed ball is a ball around `body`.
pub fn gale_enclosing_simplex(
    body: &ConvexBody,
    clip_radius: f64,
) -> Result<GaleSimplex, GeometryError> {
    let d = body.dim();
    if d > 3 {
        return Err(GeometryError::ExactDimensionUnsupported(d));
    }
    let ball = match body.kind() {
        BodyKind::Ball { center, radius } => Ball {
            center: center.clone(),
            radius: *radius,
        },
        _ => {
            let pts = vertices(body, clip_radius)?;
            let mut lo = pts[0].clone();
            let mut hi = pts[0].clone();
            for p in &pts {
                for k in 0..d {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                }
            }
            let center: Point = lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2.0).collect();
            let radius = pts.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
            Ball { center, radius }
        }
    };
    // unit circumradius means inradius 1/d
    let scale = ball.radius.max(f64::MIN_POSITIVE) * d as f64;
    let verts: Vec<Point> = regular_simplex(d)
        .into_iter()
        .map(|v| {
            v.iter()
                .zip(&ball.center)
                .map(|(x, c)| c + scale * x)
                .collect()
        })
        .collect();
    let simplex = ConvexBody::hpolytope(d, simplex_halfspaces(&verts)?)?;
    let simplex_diam = dist(&verts[0], &verts[1]);
    let body_diam = diameter(body, clip_radius)?;
    let ratio = simplex_diam / body_diam;
    if ratio > 4.0 * d as f64 {
        log::warn!("enclosing simplex is {ratio:.3} times the body diameter");
    }
    Ok(GaleSimplex {
        simplex,
        vertices: verts,
        ball,
        ratio,
    })
}
