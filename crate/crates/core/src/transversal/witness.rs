use serde::{Deserialize, Serialize};

use super::TransversalError;
use crate::combinatorics::{binomial, for_each_subset};
use crate::geometry::{
    chebyshev_ball, dilate_ellipsoid, ellipsoid_sqrt_det, max_inscribed_ellipsoid,
    unit_ball_volume, volume, BodyKind, ConvexBody, Family, GeometryError, Halfspace,
    TangentConfig, VolumeMode,
};
use crate::select::MAX_TUPLES;

/// Finite stand-in for all volume-`v` ellipsoids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub v: f64,
    pub witnesses: Vec<ConvexBody>,
}

impl WitnessSet {
    pub fn new(v: f64, witnesses: Vec<ConvexBody>, tol: f64) -> Result<Self, TransversalError> {
        if !(v > 0.0) {
            return Err(TransversalError::InvalidParameter(format!(
                "witness volume {v} must be positive"
            )));
        }
        for (index, w) in witnesses.iter().enumerate() {
            let volume = volume(w, VolumeMode::Exact, f64::MAX.sqrt())?.size();
            if !(volume >= v - tol) {
                return Err(TransversalError::SmallWitness { index, volume, v });
            }
        }
        Ok(Self { v, witnesses })
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    #[default]
    Ball,
    Ellipsoid,
}

/// `inner ⊂ outer` up to `tol`: the support of `inner` stays below every
/// facet of the tangent description of `outer`.
pub fn contains_body(
    outer: &ConvexBody,
    inner: &ConvexBody,
    tangents: &TangentConfig,
    tol: f64,
) -> bool {
    outer.to_halfspaces(tangents).iter().all(|h| {
        let h = h.normalized();
        inner.support(&h.normal) <= h.offset + tol
    })
}

/// `m[i][j]` is true when witness `j` lies in member `i`.
pub fn containment_matrix(family: &Family, w: &WitnessSet, tol: f64) -> Vec<Vec<bool>> {
    let tangents = TangentConfig::default();
    crate::par::map(family.members(), |c| {
        let facets: Vec<Halfspace> = c
            .to_halfspaces(&tangents)
            .iter()
            .map(Halfspace::normalized)
            .collect();
        w.witnesses
            .iter()
            .map(|e| {
                facets
                    .iter()
                    .all(|h| e.support(&h.normal) <= h.offset + tol)
            })
            .collect()
    })
}

/// One witness per `(d+1)`-wise intersection that holds a volume-`v`
/// ball (or ellipsoid): the largest inscribed one, shrunk about its
/// center to volume exactly `v`. Duplicates are dropped.
pub fn generate_witnesses(
    family: &Family,
    v: f64,
    kind: WitnessKind,
    tol: f64,
) -> Result<WitnessSet, TransversalError> {
    if !(v > 0.0) {
        return Err(TransversalError::InvalidParameter(format!(
            "witness volume {v} must be positive"
        )));
    }
    let d = family.dim();
    let n = family.len();
    let k = (d + 1).min(n);
    let total = binomial(n as u64, k as u64);
    if total > MAX_TUPLES {
        return Err(TransversalError::BudgetExceeded {
            subsets: total,
            max: MAX_TUPLES,
        });
    }
    let tangents = TangentConfig::default();
    let r = family.bounding_radius();
    let hs: Vec<Vec<Halfspace>> = family
        .members()
        .iter()
        .map(|b| b.to_halfspaces(&tangents))
        .collect();
    let frame: Vec<Halfspace> = (0..d)
        .flat_map(|i| {
            [
                Halfspace::axis_upper(d, i, r),
                Halfspace::axis_lower(d, i, -r),
            ]
        })
        .collect();
    let mut subsets = Vec::new();
    for_each_subset(n, k, |s| subsets.push(s.to_vec()));
    let omega = unit_ball_volume(d);
    let found = crate::par::map(&subsets, |s| -> Result<Option<ConvexBody>, GeometryError> {
        let all: Vec<Halfspace> = s
            .iter()
            .flat_map(|&i| hs[i].iter().cloned())
            .chain(frame.iter().cloned())
            .collect();
        let body = ConvexBody::hpolytope(d, all)?;
        let skip = |e: &GeometryError| {
            matches!(
                e,
                GeometryError::EmptyBody | GeometryError::EmptyInterior | GeometryError::Lp(_)
            )
        };
        match kind {
            WitnessKind::Ball => match chebyshev_ball(&body) {
                Ok(b) if omega * b.radius.powi(d as i32) >= v => Ok(Some(ConvexBody::ball(
                    b.center,
                    (v / omega).powf(1.0 / d as f64),
                )?)),
                Ok(_) => Ok(None),
                Err(e) if skip(&e) => Ok(None),
                Err(e) => Err(e),
            },
            WitnessKind::Ellipsoid => {
                if d < 2 {
                    return Err(GeometryError::ExactDimensionUnsupported(d));
                }
                match max_inscribed_ellipsoid(&body, 1e-9) {
                    Ok(e) => {
                        let vol = omega * ellipsoid_sqrt_det(&e).unwrap_or(0.0);
                        if vol >= v {
                            Ok(Some(dilate_ellipsoid(&e, (v / vol).powf(1.0 / d as f64))?))
                        } else {
                            Ok(None)
                        }
                    }
                    Err(e) if skip(&e) => Ok(None),
                    Err(e) => Err(e),
                }
            }
        }
    });
    let mut witnesses: Vec<ConvexBody> = Vec::new();
    for f in found {
        if let Some(w) = f? {
            if !witnesses.iter().any(|x| same_body(x, &w)) {
                witnesses.push(w);
            }
        }
    }
    log::info!(
        "{} witnesses of volume {v} from {} subsets",
        witnesses.len(),
        subsets.len()
    );
    WitnessSet::new(v, witnesses, tol.max(1e-9 * v))
}

fn same_body(a: &ConvexBody, b: &ConvexBody) -> bool {
    let near = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .all(|(p, q)| (p - q).abs() <= 1e-12 * p.abs().max(q.abs()).max(1.0))
    };
    match (a.kind(), b.kind()) {
        (
            BodyKind::Ball {
                center: c1,
                radius: r1,
            },
            BodyKind::Ball {
                center: c2,
                radius: r2,
            },
        ) => near(c1, c2) && near(&[*r1], &[*r2]),
        (
            BodyKind::Ellipsoid {
                center: c1,
                shape: s1,
            },
            BodyKind::Ellipsoid {
                center: c2,
                shape: s2,
            },
        ) => near(c1, c2) && s1.iter().zip(s2).all(|(x, y)| near(x, y)),
        _ => false,
    }
}
