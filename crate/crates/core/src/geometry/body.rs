use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::halfspace::{dot, norm, Halfspace, Point};
use super::GeometryError;

/// Clipping radius used when a family does not specify one.
pub const DEFAULT_BOUNDING_RADIUS: f64 = 1e6;

/// Tolerance for geometric predicates.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodyKind {
    #[serde(rename = "hpolytope")]
    HPolytope {
        halfspaces: Vec<Halfspace>,
    },
    Box {
        min: Point,
        max: Point,
    },
    Ball {
        center: Point,
        radius: f64,
    },
    /// `{center + shape^{1/2} u : |u| <= 1}`, shape symmetric positive definite.
    Ellipsoid {
        center: Point,
        shape: Vec<Vec<f64>>,
    },
    Halfspace(Halfspace),
}

/// A convex set in `R^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyKind", into = "BodyKind")]
pub struct ConvexBody {
    dim: usize,
    kind: BodyKind,
}

impl From<ConvexBody> for BodyKind {
    fn from(b: ConvexBody) -> Self {
        b.kind
    }
}

impl TryFrom<BodyKind> for ConvexBody {
    type Error = GeometryError;

    fn try_from(kind: BodyKind) -> Result<Self, Self::Error> {
        let dim = match &kind {
            BodyKind::HPolytope { halfspaces } => halfspaces
                .first()
                .map(Halfspace::dim)
                .ok_or_else(|| GeometryError::InvalidBody("hpolytope without halfspaces".into()))?,
            BodyKind::Box { min, .. } => min.len(),
            BodyKind::Ball { center, .. } => center.len(),
            BodyKind::Ellipsoid { center, .. } => center.len(),
            BodyKind::Halfspace(h) => h.dim(),
        };
        ConvexBody::new(dim, kind)
    }
}

impl ConvexBody {
    pub fn new(dim: usize, kind: BodyKind) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::InvalidBody(
                "dimension must be positive".into(),
            ));
        }
        let check_len = |v: &[f64], what: &str| {
            if v.len() != dim {
                Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                })
            } else if !v.iter().all(|x| x.is_finite()) {
                Err(GeometryError::InvalidBody(format!("non-finite {what}")))
            } else {
                Ok(())
            }
        };
        match &kind {
            BodyKind::HPolytope { halfspaces } => {
                for h in halfspaces {
                    check_len(&h.normal, "normal")?;
                    Halfspace::new(h.normal.clone(), h.offset)?;
                }
            }
            BodyKind::Box { min, max } => {
                check_len(min, "box corner")?;
                check_len(max, "box corner")?;
                if min.iter().zip(max).any(|(a, b)| a > b) {
                    return Err(GeometryError::InvalidBody("box min exceeds max".into()));
                }
            }
            BodyKind::Ball { center, radius } => {
                check_len(center, "center")?;
                if !(*radius >= 0.0) || !radius.is_finite() {
                    return Err(GeometryError::InvalidBody("negative ball radius".into()));
                }
            }
            BodyKind::Ellipsoid { center, shape } => {
                check_len(center, "center")?;
                if shape.len() != dim || shape.iter().any(|r| r.len() != dim) {
                    return Err(GeometryError::InvalidBody(
                        "ellipsoid shape is not d x d".into(),
                    ));
                }
                let m = to_matrix(shape);
                if (&m - m.transpose()).amax() > 1e-9 * m.amax().max(1.0) {
                    return Err(GeometryError::InvalidBody(
                        "ellipsoid shape not symmetric".into(),
                    ));
                }
                if m.clone().cholesky().is_none() {
                    return Err(GeometryError::InvalidBody(
                        "ellipsoid shape not positive definite".into(),
                    ));
                }
            }
            BodyKind::Halfspace(h) => {
                check_len(&h.normal, "normal")?;
                Halfspace::new(h.normal.clone(), h.offset)?;
            }
        }
        Ok(Self { dim, kind })
    }

    pub fn hpolytope(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self, GeometryError> {
        Self::new(dim, BodyKind::HPolytope { halfspaces })
    }

    pub fn boxed(min: Point, max: Point) -> Result<Self, GeometryError> {
        Self::new(min.len(), BodyKind::Box { min, max })
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self, GeometryError> {
        Self::new(center.len(), BodyKind::Ball { center, radius })
    }

    pub fn ellipsoid(center: Point, shape: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        Self::new(center.len(), BodyKind::Ellipsoid { center, shape })
    }

    pub fn halfspace(h: Halfspace) -> Result<Self, GeometryError> {
        Self::new(h.dim(), BodyKind::Halfspace(h))
    }

    /// Axis-aligned cube `[lo, lo + side]^dim`.
    pub fn cube(dim: usize, lo: f64, side: f64) -> Self {
        Self {
            dim,
            kind: BodyKind::Box {
                min: vec![lo; dim],
                max: vec![lo + side; dim],
            },
        }
    }

    /// Convex polygon from counter-clockwise vertices.
    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::InvalidBody(
                "polygon needs 3 vertices".into(),
            ));
        }
        let mut hs = Vec::with_capacity(n);
        for i in 0..n {
            let p = vertices[i];
            let q = vertices[(i + 1) % n];
            let normal = vec![q[1] - p[1], p[0] - q[0]];
            if norm(&normal) == 0.0 {
                continue;
            }
            let offset = normal[0] * p[0] + normal[1] * p[1];
            hs.push(Halfspace { normal, offset });
        }
        Self::hpolytope(2, hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    /// Halfspace description. Boxes convert exactly; balls and ellipsoids are
    /// replaced by circumscribed polytopes with `tangents` facets.
    pub fn to_halfspaces(&self, tangents: &TangentConfig) -> Vec<Halfspace> {
        let d = self.dim;
        match &self.kind {
            BodyKind::HPolytope { halfspaces } => halfspaces.clone(),
            BodyKind::Halfspace(h) => vec![h.clone()],
            BodyKind::Box { min, max } => (0..d)
                .flat_map(|i| {
                    [
                        Halfspace::axis_upper(d, i, max[i]),
                        Halfspace::axis_lower(d, i, min[i]),
                    ]
                })
                .collect(),
            BodyKind::Ball { .. } | BodyKind::Ellipsoid { .. } => tangents
                .normals(d)
                .into_iter()
                .map(|u| {
                    let offset = self.support(&u);
                    Halfspace { normal: u, offset }
                })
                .collect(),
        }
    }

    /// Support function `h(u) = sup {u . x : x in body}`; `INFINITY` when
    /// unbounded in direction `u`. For polytopes this solves an LP.
    pub fn support(&self, u: &[f64]) -> f64 {
        match &self.kind {
            BodyKind::Ball { center, radius } => dot(u, center) + radius * norm(u),
            BodyKind::Ellipsoid { center, shape } => {
                let a = to_matrix(shape);
                let v = DVector::from_column_slice(u);
                dot(u, center) + (v.dot(&(&a * &v))).max(0.0).sqrt()
            }
            BodyKind::Box { min, max } => u
                .iter()
                .enumerate()
                .map(|(i, &ui)| (ui * min[i]).max(ui * max[i]))
                .sum(),
            BodyKind::Halfspace(h) => {
                let n = norm(&h.normal);
                let c = dot(u, &h.normal) / n;
                if (norm(u) - c).abs() <= 1e-12 * norm(u).max(1.0) && c > 0.0 {
                    h.offset / n * c
                } else {
                    f64::INFINITY
                }
            }
            BodyKind::HPolytope { halfspaces } => {
                super::volume::polytope_support(self.dim, halfspaces, u)
            }
        }
    }

    /// Exact membership (no tangent approximation).
    pub fn contains_point(&self, x: &[f64], tol: f64) -> bool {
        match &self.kind {
            BodyKind::HPolytope { halfspaces } => halfspaces.iter().all(|h| h.contains(x, tol)),
            BodyKind::Halfspace(h) => h.contains(x, tol),
            BodyKind::Box { min, max } => x
                .iter()
                .enumerate()
                .all(|(i, &v)| v >= min[i] - tol && v <= max[i] + tol),
            BodyKind::Ball { center, radius } => super::halfspace::dist(x, center) <= radius + tol,
            BodyKind::Ellipsoid { center, shape } => ellipsoid_gauge(center, shape, x) <= 1.0 + tol,
        }
    }

    pub fn is_bounded_kind(&self) -> bool {
        !matches!(
            self.kind,
            BodyKind::HPolytope { .. } | BodyKind::Halfspace(_)
        )
    }

    /// Image under `x -> m x + b` for an invertible `m`.
    pub fn affine_image(&self, m: &[Vec<f64>], b: &[f64]) -> Result<Self, GeometryError> {
        let d = self.dim;
        let mat = to_matrix(m);
        let inv = mat
            .clone()
            .try_inverse()
            .ok_or_else(|| GeometryError::InvalidBody("singular affine map".into()))?;
        let bv = DVector::from_column_slice(b);
        let map_h = |h: &Halfspace| {
            // a.x <= c  ->  (M^{-T} a).y <= c + (M^{-T} a).b
            let a = inv.transpose() * DVector::from_column_slice(&h.normal);
            Halfspace {
                normal: a.iter().copied().collect(),
                offset: h.offset + a.dot(&bv),
            }
        };
        match &self.kind {
            BodyKind::HPolytope { halfspaces } => {
                Self::hpolytope(d, halfspaces.iter().map(map_h).collect())
            }
            BodyKind::Halfspace(h) => Self::halfspace(map_h(h)),
            BodyKind::Box { .. } => {
                let hs = self.to_halfspaces(&TangentConfig::default());
                Self::hpolytope(d, hs.iter().map(map_h).collect())
            }
            BodyKind::Ball { center, radius } => {
                let c = &mat * DVector::from_column_slice(center) + &bv;
                let s = &mat * mat.transpose() * (radius * radius);
                Self::ellipsoid(c.iter().copied().collect(), from_matrix(&s))
            }
            BodyKind::Ellipsoid { center, shape } => {
                let c = &mat * DVector::from_column_slice(center) + &bv;
                let s = &mat * to_matrix(shape) * mat.transpose();
                Self::ellipsoid(c.iter().copied().collect(), from_matrix(&s))
            }
        }
    }
}

/// `sqrt((x-c)^T A^{-1} (x-c))`: 1 on the boundary of the ellipsoid.
pub fn ellipsoid_gauge(center: &[f64], shape: &[Vec<f64>], x: &[f64]) -> f64 {
    let a = to_matrix(shape);
    let v = DVector::from_iterator(x.len(), x.iter().zip(center).map(|(a, b)| a - b));
    match a.cholesky() {
        Some(ch) => v.dot(&ch.solve(&v)).max(0.0).sqrt(),
        None => f64::INFINITY,
    }
}

pub(crate) fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

pub(crate) fn from_matrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Number and placement of tangent facets used to convert balls and
/// ellipsoids into polytopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct TangentConfig {
    /// Fixed facet count; `None` means `2^ceil(log2(32 d))`.
    pub count: Option<usize>,
}

impl TangentConfig {
    pub fn with_count(count: usize) -> Self {
        Self { count: Some(count) }
    }

    pub fn count_for(&self, dim: usize) -> usize {
        self.count
            .unwrap_or_else(|| (32 * dim).next_power_of_two())
            .max(2 * dim)
    }

    /// Quasi-uniform unit normals on the sphere `S^{dim-1}`.
    pub fn normals(&self, dim: usize) -> Vec<Vec<f64>> {
        let k = self.count_for(dim);
        match dim {
            1 => vec![vec![1.0], vec![-1.0]],
            2 => (0..k)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / k as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect(),
            3 => {
                // Fibonacci lattice.
                let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
                (0..k)
                    .map(|i| {
                        let z = 1.0 - (2.0 * i as f64 + 1.0) / k as f64;
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        let a = golden * i as f64;
                        vec![r * a.cos(), r * a.sin(), z]
                    })
                    .collect()
            }
            _ => {
                // Coordinate directions plus a Halton-style low-discrepancy
                // fill mapped radially to the sphere.
                let mut out = Vec::with_capacity(k);
                for i in 0..dim {
                    for s in [1.0, -1.0] {
                        let mut v = vec![0.0; dim];
                        v[i] = s;
                        out.push(v);
                    }
                }
                let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
                let mut idx = 1u64;
                while out.len() < k {
                    let v: Vec<f64> = (0..dim)
                        .map(|j| 2.0 * radical_inverse(idx, primes[j % primes.len()]) - 1.0)
                        .collect();
                    idx += 1;
                    let n = norm(&v);
                    if n > 1e-3 {
                        out.push(v.iter().map(|x| x / n).collect());
                    }
                }
                out
            }
        }
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    r
}

/// Ordered list of convex sets in a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct Family {
    dim: usize,
    members: Vec<ConvexBody>,
    bounding_radius: f64,
}

/// Current version of the family JSON layout.
pub const FAMILY_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    #[serde(default = "schema_version")]
    version: u32,
    dimension: usize,
    #[serde(default = "default_radius")]
    bounding_radius: f64,
    sets: Vec<ConvexBody>,
}

fn schema_version() -> u32 {
    FAMILY_SCHEMA_VERSION
}

fn default_radius() -> f64 {
    DEFAULT_BOUNDING_RADIUS
}

impl TryFrom<FamilyRepr> for Family {
    type Error = GeometryError;

    fn try_from(r: FamilyRepr) -> Result<Self, Self::Error> {
        if r.version != FAMILY_SCHEMA_VERSION {
            return Err(GeometryError::InvalidBody(format!(
                "unsupported family schema version {}",
                r.version
            )));
        }
        Family::with_radius(r.dimension, r.sets, r.bounding_radius)
    }
}

impl From<Family> for FamilyRepr {
    fn from(f: Family) -> Self {
        FamilyRepr {
            version: FAMILY_SCHEMA_VERSION,
            dimension: f.dim,
            bounding_radius: f.bounding_radius,
            sets: f.members,
        }
    }
}

impl Family {
    pub fn new(dim: usize, members: Vec<ConvexBody>) -> Result<Self, GeometryError> {
        Self::with_radius(dim, members, DEFAULT_BOUNDING_RADIUS)
    }

    pub fn with_radius(
        dim: usize,
        members: Vec<ConvexBody>,
        bounding_radius: f64,
    ) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::InvalidBody(
                "dimension must be positive".into(),
            ));
        }
        if !(bounding_radius > 0.0) || !bounding_radius.is_finite() {
            return Err(GeometryError::NonPositiveClipRadius(bounding_radius));
        }
        if let Some(b) = members.iter().find(|b| b.dim() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
        Ok(Self {
            dim,
            members,
            bounding_radius,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ConvexBody] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &ConvexBody {
        &self.members[i]
    }

    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    /// Subfamily in the given index order.
    pub fn subfamily(&self, idx: &[usize]) -> Family {
        Family {
            dim: self.dim,
            members: idx.iter().map(|&i| self.members[i].clone()).collect(),
            bounding_radius: self.bounding_radius,
        }
    }

    pub fn map_members(
        &self,
        f: impl Fn(&ConvexBody) -> Result<ConvexBody, GeometryError>,
    ) -> Result<Family, GeometryError> {
        let members = self.members.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Family::with_radius(self.dim, members, self.bounding_radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_count_follows_dimension() {
        let t = TangentConfig::default();
        assert_eq!(t.count_for(2), 64);
        assert_eq!(t.count_for(3), 128);
        assert_eq!(t.normals(3).len(), 128);
        for n in t.normals(5) {
            assert!((norm(&n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(ConvexBody::boxed(vec![1.0, 0.0], vec![0.0, 1.0]).is_err());
        assert!(ConvexBody::ball(vec![0.0], -1.0).is_err());
        assert!(
            ConvexBody::ellipsoid(vec![0.0, 0.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_err()
        );
        assert!(Family::new(2, vec![ConvexBody::cube(3, 0.0, 1.0)]).is_err());
        assert!(Family::with_radius(2, vec![], 0.0).is_err());
    }

    #[test]
    fn support_functions_agree_with_definitions() {
        let b = ConvexBody::ball(vec![1.0, 2.0], 3.0).unwrap();
        assert!((b.support(&[0.0, 1.0]) - 5.0).abs() < 1e-12);
        let e =
            ConvexBody::ellipsoid(vec![0.0, 0.0], vec![vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((e.support(&[1.0, 0.0]) - 2.0).abs() < 1e-12);
        let bx = ConvexBody::boxed(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        assert!((bx.support(&[1.0, -1.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_layout_uses_type_tags() {
        let f = Family::new(
            2,
            vec![
                ConvexBody::cube(2, 0.0, 1.0),
                ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap(),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"type\":\"box\""));
        assert!(s.contains("\"dimension\":2"));
        let back: Family = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = s.replace("\"radius\":1.0", "\"radius\":-1.0");
        assert!(serde_json::from_str::<Family>(&bad).is_err());
    }

    #[test]
    fn affine_image_of_ball_is_ellipsoid() {
        let b = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let img = b
            .affine_image(&[vec![2.0, 0.0], vec![0.0, 0.5]], &[1.0, 1.0])
            .unwrap();
        assert!(img.contains_point(&[3.0, 1.0], 1e-9));
        assert!(!img.contains_point(&[1.0, 1.6], 1e-9));
    }
}
