use serde::{Deserialize, Serialize};

use super::DiameterThresholdConfig;
use crate::combinatorics::{binomial, for_each_subset};
use crate::geometry::{
    dist, vertices, ConvexBody, Family, GeometryError, Halfspace, Point, TangentConfig,
};
use crate::select::{Measure, MAX_TUPLES};
use crate::transversal::{
    frac_matching_matrix, frac_transversal_matrix, pq_hypothesis_measure, weak_epsilon_net_matrix,
    PqCheck, Stage, TransversalError,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn length(&self) -> f64 {
        dist(&self.a, &self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(p, q)| 0.5 * (p + q))
            .collect()
    }
}

/// Endpoints and midpoint lie in the body.
pub fn segment_in(body: &ConvexBody, s: &Segment, tol: f64) -> bool {
    body.contains_point(&s.a, tol)
        && body.contains_point(&s.b, tol)
        && body.contains_point(&s.midpoint(), tol)
}

/// `m[i][j]` is true when segment `j` lies in member `i`.
pub fn segment_containment(family: &Family, segments: &[Segment], tol: f64) -> Vec<Vec<bool>> {
    crate::par::map(family.members(), |c| {
        segments.iter().map(|s| segment_in(c, s, tol)).collect()
    })
}

/// For every `(d+1)`-wise intersection of diameter at least `v`, its
/// longest vertex chord shrunk about the midpoint to length `v`.
pub fn generate_segments(family: &Family, v: f64) -> Result<Vec<Segment>, TransversalError> {
    if !(v > 0.0) {
        return Err(TransversalError::InvalidParameter(format!(
            "witness diameter {v} must be positive"
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
    let found = crate::par::map(&subsets, |s| -> Result<Option<Segment>, GeometryError> {
        let all: Vec<Halfspace> = s
            .iter()
            .flat_map(|&i| hs[i].iter().cloned())
            .chain(frame.iter().cloned())
            .collect();
        let body = ConvexBody::hpolytope(d, all)?;
        let pts = match vertices(&body, 2.0 * r) {
            Ok(p) => p,
            Err(GeometryError::EmptyBody) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut best = (0.0, 0, 0);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let l = dist(&pts[i], &pts[j]);
                if l > best.0 {
                    best = (l, i, j);
                }
            }
        }
        let (len, i, j) = best;
        if len < v {
            return Ok(None);
        }
        // keep the chord inside by pulling both ends toward the midpoint
        let mid: Point = pts[i]
            .iter()
            .zip(&pts[j])
            .map(|(p, q)| 0.5 * (p + q))
            .collect();
        let half = 0.5 * v / len;
        let end = |sign: f64| -> Point {
            mid.iter()
                .zip(pts[j].iter().zip(&pts[i]))
                .map(|(m, (q, p))| m + sign * half * (q - p))
                .collect()
        };
        Ok(Some(Segment {
            a: end(-1.0),
            b: end(1.0),
        }))
    });
    let mut out: Vec<Segment> = Vec::new();
    for f in found {
        if let Some(s) = f? {
            let dup = out
                .iter()
                .any(|t| (dist(&t.a, &s.a) + dist(&t.b, &s.b)) <= 1e-12 * (1.0 + s.length()));
            if !dup {
                out.push(s);
            }
        }
    }
    log::info!("{} segment witnesses of length {v}", out.len());
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentCertificate {
    pub indices: Vec<usize>,
    pub segments: Vec<Segment>,
    pub size: usize,
}

impl SegmentCertificate {
    /// Every member contains one of the segments.
    pub fn verify(&self, family: &Family, tol: f64) -> bool {
        family
            .members()
            .iter()
            .all(|c| self.segments.iter().any(|s| segment_in(c, s, tol)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub hypothesis: PqCheck,
    pub witnesses: usize,
    pub tau: f64,
    pub nu: f64,
    pub eps: f64,
    pub certificate: SegmentCertificate,
    pub verified: bool,
}

/// The `(p, d+1)` transversal pipeline with diameter for volume and
/// length-`v` segments as witnesses.
pub fn diameter_pq_transversal(
    family: &Family,
    p: usize,
    v: f64,
    cfg: &DiameterThresholdConfig,
    tol: f64,
) -> Result<SegmentReport, TransversalError> {
    cfg.validate().map_err(TransversalError::from)?;
    let hypothesis = pq_hypothesis_measure(family, p, Measure::Diameter, cfg.threshold, tol)
        .map_err(|e| e.at(Stage::Hypothesis))?;
    if let Some(subset) = &hypothesis.violation {
        return Err(TransversalError::HypothesisFailed {
            subset: subset.clone(),
            q: family.dim() + 1,
        }
        .at(Stage::Hypothesis));
    }
    let segments = generate_segments(family, v).map_err(|e| e.at(Stage::Witnesses))?;
    let m = segment_containment(family, &segments, tol);
    let phi = frac_transversal_matrix(&m, segments.len()).map_err(|e| e.at(Stage::Lp))?;
    let nu = frac_matching_matrix(&m, segments.len())
        .map_err(|e| e.at(Stage::Lp))?
        .objective;
    let tau = phi.objective;
    let weights: Vec<f64> = phi.weights.iter().map(|x| x / tau).collect();
    let eps = 1.0 / tau;
    let indices = weak_epsilon_net_matrix(&m, &weights, eps, tol).map_err(|e| e.at(Stage::Net))?;
    let certificate = SegmentCertificate {
        segments: indices.iter().map(|&j| segments[j].clone()).collect(),
        size: indices.len(),
        indices,
    };
    let verified = certificate.verify(family, tol);
    Ok(SegmentReport {
        hypothesis,
        witnesses: segments.len(),
        tau,
        nu,
        eps,
        certificate,
        verified,
    })
}
