use nalgebra::{DMatrix, DVector};

use super::body::{from_matrix, BodyKind, ConvexBody, TangentConfig};
use super::halfspace::norm;
use super::metric::chebyshev_ball;
use super::GeometryError;

const MAX_NEWTON_STEPS: usize = 2_000;

/// Symmetric basis matrices `E_k` for the upper triangle of a `d x d` matrix.
fn sym_basis(d: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            let mut e = DMatrix::zeros(d, d);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            out.push(e);
        }
    }
    out
}

struct Problem {
    d: usize,
    a: Vec<DVector<f64>>,
    b: Vec<f64>,
    basis: Vec<DMatrix<f64>>,
}

impl Problem {
    fn nparams(&self) -> usize {
        self.basis.len() + self.d
    }

    fn unpack(&self, p: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let mut bm = DMatrix::zeros(self.d, self.d);
        for (k, e) in self.basis.iter().enumerate() {
            bm += e * p[k];
        }
        let c = DVector::from_iterator(self.d, p.iter().skip(self.basis.len()).copied());
        (bm, c)
    }

    /// Barrier value, or `None` outside the domain.
    fn value(&self, t: f64, p: &DVector<f64>) -> Option<f64> {
        let (bm, c) = self.unpack(p);
        let chol = bm.clone().cholesky()?;
        let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let mut f = -t * logdet;
        for (a, &b) in self.a.iter().zip(&self.b) {
            let s = b - a.dot(&c) - (&bm * a).norm();
            if s <= 0.0 {
                return None;
            }
            f -= s.ln();
        }
        Some(f)
    }

    fn grad_hess(&self, t: f64, p: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let nb = self.basis.len();
        let n = self.nparams();
        let (bm, c) = self.unpack(p);
        let binv = bm.clone().try_inverse().expect("positive definite");
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        let be: Vec<DMatrix<f64>> = self.basis.iter().map(|e| &binv * e).collect();
        for k in 0..nb {
            g[k] -= t * be[k].trace();
            for l in 0..nb {
                h[(k, l)] += t * (&be[k] * &be[l]).trace();
            }
        }
        for (a, &b) in self.a.iter().zip(&self.b) {
            let ba = &bm * a;
            let nn = ba.norm();
            let s = b - a.dot(&c) - nn;
            let u = &ba / nn;
            let ea: Vec<DVector<f64>> = self.basis.iter().map(|e| e * a).collect();
            let mut q = DVector::zeros(n);
            for k in 0..nb {
                q[k] = u.dot(&ea[k]);
            }
            for i in 0..self.d {
                q[nb + i] = a[i];
            }
            g += &q / s;
            h += &q * q.transpose() / (s * s);
            for k in 0..nb {
                for l in 0..nb {
                    h[(k, l)] += (ea[k].dot(&ea[l]) - q[k] * q[l]) / (nn * s);
                }
            }
        }
        (g, h)
    }
}

/// Maximum-volume inscribed ellipsoid of a bounded polytope, by a
/// log-barrier Newton method on `max log det B` subject to
/// `|B a_i| + a_i . c <= b_i`. Returns `Ellipsoid(c, B^2)`.
pub fn max_inscribed_ellipsoid(body: &ConvexBody, tol: f64) -> Result<ConvexBody, GeometryError> {
    let d = body.dim();
    match body.kind() {
        BodyKind::Ball { center, radius } => {
            let r2 = radius * radius;
            return ConvexBody::ellipsoid(
                center.clone(),
                (0..d)
                    .map(|i| (0..d).map(|j| if i == j { r2 } else { 0.0 }).collect())
                    .collect(),
            );
        }
        BodyKind::Ellipsoid { .. } => return Ok(body.clone()),
        _ => {}
    }
    let ball = chebyshev_ball(body)?;
    let hs = body.to_halfspaces(&TangentConfig::default());
    let prob = Problem {
        d,
        a: hs
            .iter()
            .map(|h| DVector::from_iterator(d, h.normal.iter().map(|v| v / norm(&h.normal))))
            .collect(),
        b: hs.iter().map(|h| h.offset / norm(&h.normal)).collect(),
        basis: sym_basis(d),
    };
    let nb = prob.basis.len();
    let mut p = DVector::zeros(prob.nparams());
    let mut k = 0;
    for i in 0..d {
        for j in i..d {
            if i == j {
                p[k] = 0.5 * ball.radius;
            }
            k += 1;
        }
    }
    for i in 0..d {
        p[nb + i] = ball.center[i];
    }
    let m = hs.len() as f64;
    let tol = tol.max(1e-14);
    // The barrier weight is relative to log det, whose scale is set by the body.
    let mut t = 1.0;
    let mut steps = 0;
    loop {
        loop {
            steps += 1;
            if steps > MAX_NEWTON_STEPS {
                return Err(GeometryError::NonConvergence(steps));
            }
            let (g, h) = prob.grad_hess(t, &p);
            let step = match h.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => {
                    let ridge = 1e-12 * h.diagonal().amax().max(1.0);
                    let hr = h + DMatrix::identity(g.len(), g.len()) * ridge;
                    match hr.cholesky() {
                        Some(ch) => ch.solve(&(-&g)),
                        None => return Err(GeometryError::NonConvergence(steps)),
                    }
                }
            };
            let decrement = -g.dot(&step);
            if decrement / 2.0 <= 1e-10 {
                break;
            }
            let f0 = prob.value(t, &p).expect("interior iterate");
            let mut alpha = 1.0;
            loop {
                let cand = &p + &step * alpha;
                if let Some(f) = prob.value(t, &cand) {
                    if f <= f0 - 0.25 * alpha * decrement {
                        p = cand;
                        if f0 - f <= 1e-15 * f0.abs() {
                            // no representable progress left at this weight
                            alpha = 0.0;
                        }
                        break;
                    }
                }
                alpha *= 0.5;
                if alpha < 1e-16 {
                    break;
                }
            }
            if alpha < 1e-16 {
                break;
            }
        }
        if m / t < tol {
            break;
        }
        t *= 8.0;
    }
    let (bm, c) = prob.unpack(&p);
    let shape = &bm * &bm;
    let sym = (&shape + shape.transpose()) * 0.5;
    ConvexBody::ellipsoid(c.iter().copied().collect(), from_matrix(&sym))
}

/// Dilation of an ellipsoid by `factor` about its center.
pub fn dilate_ellipsoid(e: &ConvexBody, factor: f64) -> Result<ConvexBody, GeometryError> {
    match e.kind() {
        BodyKind::Ellipsoid { center, shape } => ConvexBody::ellipsoid(
            center.clone(),
            shape
                .iter()
                .map(|r| r.iter().map(|v| v * factor * factor).collect())
                .collect(),
        ),
        BodyKind::Ball { center, radius } => ConvexBody::ball(center.clone(), radius * factor),
        _ => Err(GeometryError::InvalidBody("not an ellipsoid".into())),
    }
}

/// Scale for tests and callers: `sqrt(det A)` of an ellipsoid body.
pub(crate) fn ellipsoid_sqrt_det(e: &ConvexBody) -> Option<f64> {
    match e.kind() {
        BodyKind::Ellipsoid { shape, .. } => {
            Some(super::body::to_matrix(shape).determinant().max(0.0).sqrt())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ellipsoid_gauge, intersect, unit_ball_volume, vertices};

    #[test]
    fn square_gets_inscribed_disk() {
        let e = max_inscribed_ellipsoid(&ConvexBody::cube(2, 0.0, 1.0), 1e-10).unwrap();
        let BodyKind::Ellipsoid { center, shape } = e.kind() else {
            panic!()
        };
        assert!((center[0] - 0.5).abs() < 1e-6 && (center[1] - 0.5).abs() < 1e-6);
        assert!((shape[0][0] - 0.25).abs() < 1e-6 && (shape[1][1] - 0.25).abs() < 1e-6);
        assert!(shape[0][1].abs() < 1e-6);
    }

    #[test]
    fn tangent_disk_polygon_recovers_disk() {
        let p = intersect(&[ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap()]).unwrap();
        let e = max_inscribed_ellipsoid(&p, 1e-10).unwrap();
        let area = unit_ball_volume(2) * ellipsoid_sqrt_det(&e).unwrap();
        assert!((area - std::f64::consts::PI).abs() < 0.02 * std::f64::consts::PI);
    }

    #[test]
    fn triangle_in_twice_john_ellipse() {
        let t = ConvexBody::polygon(&[[0.0, 0.0], [5.0, 1.0], [1.0, 3.0]]).unwrap();
        let e = max_inscribed_ellipsoid(&t, 1e-10).unwrap();
        let BodyKind::Ellipsoid { center, shape } = e.kind() else {
            panic!()
        };
        // For a triangle the John ellipse is the Steiner inellipse, centered
        // at the centroid.
        assert!((center[0] - 2.0).abs() < 1e-5 && (center[1] - 4.0 / 3.0).abs() < 1e-5);
        for v in vertices(&t, 1e6).unwrap() {
            let g = ellipsoid_gauge(center, shape, &v);
            assert!((g - 2.0).abs() < 1e-4, "{g}");
        }
    }

    #[test]
    fn tetrahedron_ellipsoid_is_centered() {
        let t = crate::geometry::ConvexBody::hpolytope(
            3,
            vec![
                crate::geometry::Halfspace::new(vec![-1.0, 0.0, 0.0], 0.0).unwrap(),
                crate::geometry::Halfspace::new(vec![0.0, -1.0, 0.0], 0.0).unwrap(),
                crate::geometry::Halfspace::new(vec![0.0, 0.0, -1.0], 0.0).unwrap(),
                crate::geometry::Halfspace::new(vec![1.0, 1.0, 1.0], 1.0).unwrap(),
            ],
        )
        .unwrap();
        let e = max_inscribed_ellipsoid(&t, 1e-10).unwrap();
        let BodyKind::Ellipsoid { center, .. } = e.kind() else {
            panic!()
        };
        for c in center {
            assert!((c - 0.25).abs() < 1e-5);
        }
    }
}
