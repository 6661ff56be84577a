use serde::{Deserialize, Serialize};

use super::hypothesis::{pq_hypothesis_check, PqCheck};
use super::net::{weak_epsilon_net_matrix, TransversalCertificate};
use super::programs::{frac_matching_matrix, frac_transversal_matrix};
use super::witness::{containment_matrix, generate_witnesses, WitnessKind};
use super::{Stage, TransversalError};
use crate::geometry::Family;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PqOptions {
    /// Volume a good `(d+1)`-subset must reach.
    pub threshold: f64,
    pub kind: WitnessKind,
    pub tol: f64,
}

impl Default for PqOptions {
    fn default() -> Self {
        Self {
            threshold: 1.0,
            kind: WitnessKind::Ball,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PqTransversalReport {
    pub hypothesis: PqCheck,
    pub witnesses: usize,
    /// Fractional transversal number over the witness set.
    pub tau: f64,
    /// Fractional matching number over the witness set.
    pub nu: f64,
    pub eps: f64,
    pub certificate: TransversalCertificate,
    pub verified: bool,
}

/// Hypothesis check, witness generation, fractional transversal LP and
/// greedy net with `eps = 1 / tau`.
pub fn pq_transversal(
    family: &Family,
    p: usize,
    v: f64,
    opts: &PqOptions,
) -> Result<PqTransversalReport, TransversalError> {
    let tol = opts.tol;
    let hypothesis =
        pq_hypothesis_check(family, p, opts.threshold, tol).map_err(|e| e.at(Stage::Hypothesis))?;
    if let Some(subset) = &hypothesis.violation {
        return Err(TransversalError::HypothesisFailed {
            subset: subset.clone(),
            q: family.dim() + 1,
        }
        .at(Stage::Hypothesis));
    }
    let w = generate_witnesses(family, v, opts.kind, tol).map_err(|e| e.at(Stage::Witnesses))?;
    let m = containment_matrix(family, &w, tol);
    let phi = frac_transversal_matrix(&m, w.len()).map_err(|e| e.at(Stage::Lp))?;
    let nu = frac_matching_matrix(&m, w.len())
        .map_err(|e| e.at(Stage::Lp))?
        .objective;
    let tau = phi.objective;
    let weights: Vec<f64> = phi.weights.iter().map(|x| x / tau).collect();
    let eps = 1.0 / tau;
    let idx = weak_epsilon_net_matrix(&m, &weights, eps, tol).map_err(|e| e.at(Stage::Net))?;
    let certificate = TransversalCertificate::from_indices(&w, idx);
    let verified = certificate.verify(family, tol);
    Ok(PqTransversalReport {
        hypothesis,
        witnesses: w.len(),
        tau,
        nu,
        eps,
        certificate,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexBody;

    #[test]
    fn nested_cubes_need_one_witness() {
        let f = Family::new(
            2,
            (0..5)
                .map(|i| ConvexBody::cube(2, -0.1 * i as f64, 2.0 + 0.2 * i as f64))
                .collect(),
        )
        .unwrap();
        let r = pq_transversal(&f, 3, 1.0, &PqOptions::default()).unwrap();
        assert_eq!(r.certificate.size, 1);
        assert!(r.verified);
        assert!((r.tau - 1.0).abs() < 1e-9 && (r.nu - 1.0).abs() < 1e-9);
    }

    #[test]
    fn violated_hypothesis_is_tagged() {
        let f = Family::new(
            2,
            (0..4)
                .map(|i| ConvexBody::cube(2, 3.0 * i as f64, 2.0))
                .collect(),
        )
        .unwrap();
        let e = pq_transversal(&f, 3, 1.0, &PqOptions::default()).unwrap_err();
        assert!(matches!(
            e,
            TransversalError::Stage {
                stage: Stage::Hypothesis,
                ..
            }
        ));
    }
}
