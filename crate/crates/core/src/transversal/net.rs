use serde::{Deserialize, Serialize};

use super::programs::FractionalAssignment;
use super::witness::{containment_matrix, contains_body, WitnessSet};
use super::TransversalError;
use crate::combinatorics::{binomial, for_each_subset};
use crate::geometry::{ConvexBody, Family, TangentConfig};

/// Witnesses such that every member contains at least one of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalCertificate {
    /// Positions in the witness set.
    pub indices: Vec<usize>,
    pub bodies: Vec<ConvexBody>,
    pub size: usize,
}

impl TransversalCertificate {
    pub fn from_indices(w: &WitnessSet, indices: Vec<usize>) -> Self {
        Self {
            bodies: indices.iter().map(|&j| w.witnesses[j].clone()).collect(),
            size: indices.len(),
            indices,
        }
    }

    /// Direct containment check of every member against the bodies.
    pub fn verify(&self, family: &Family, tol: f64) -> bool {
        let t = TangentConfig::default();
        family
            .members()
            .iter()
            .all(|c| self.bodies.iter().any(|e| contains_body(c, e, &t, tol)))
    }
}

/// Greedy cover by positive-weight witnesses: each step takes the
/// witness lying in the most members not yet covered.
pub fn weak_epsilon_net_greedy(
    family: &Family,
    w: &WitnessSet,
    weights: &FractionalAssignment,
    eps: f64,
    tol: f64,
) -> Result<TransversalCertificate, TransversalError> {
    let m = containment_matrix(family, w, tol);
    let idx = weak_epsilon_net_matrix(&m, &weights.weights, eps, tol)?;
    Ok(TransversalCertificate::from_indices(w, idx))
}

pub fn weak_epsilon_net_matrix(
    m: &[Vec<bool>],
    weights: &[f64],
    eps: f64,
    tol: f64,
) -> Result<Vec<usize>, TransversalError> {
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(TransversalError::InvalidParameter(format!(
            "weights sum to {total}, not 1"
        )));
    }
    if !(eps > 0.0) {
        return Err(TransversalError::InvalidParameter(format!(
            "eps = {eps} must be positive"
        )));
    }
    for (member, row) in m.iter().enumerate() {
        if row.len() != weights.len() {
            return Err(TransversalError::InvalidParameter(format!(
                "row {member} has {} witnesses, weights have {}",
                row.len(),
                weights.len()
            )));
        }
        if !row.iter().zip(weights).any(|(&b, &x)| b && x > 0.0) {
            return Err(TransversalError::Uncovered { member });
        }
        let weight: f64 = row
            .iter()
            .zip(weights)
            .filter(|(b, _)| **b)
            .map(|(_, x)| x)
            .sum();
        if weight < eps - tol {
            return Err(TransversalError::LowWeight {
                member,
                weight,
                eps,
            });
        }
    }
    let mut uncovered: Vec<usize> = (0..m.len()).collect();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let best = (0..weights.len())
            .filter(|&j| weights[j] > 0.0)
            .map(|j| (j, uncovered.iter().filter(|&&i| m[i][j]).count()))
            .fold((usize::MAX, 0), |b, c| if c.1 > b.1 { c } else { b });
        debug_assert!(best.1 > 0);
        chosen.push(best.0);
        uncovered.retain(|&i| !m[i][best.0]);
    }
    let n = m.len().max(1) as f64;
    log::info!(
        "greedy net of size {} (ln(n)/eps = {:.3})",
        chosen.len(),
        n.ln() / eps
    );
    Ok(chosen)
}

/// Smallest set of witnesses covering every row, lexicographically first
/// among the smallest; `None` if no cover has at most `max_size`.
pub fn min_cover_exhaustive(
    m: &[Vec<bool>],
    max_size: usize,
) -> Result<Option<Vec<usize>>, TransversalError> {
    let w = m.first().map_or(0, Vec::len);
    if m.is_empty() {
        return Ok(Some(Vec::new()));
    }
    const BUDGET: u128 = 50_000_000;
    for k in 1..=max_size.min(w) {
        let combos = binomial(w as u64, k as u64);
        if combos > BUDGET {
            return Err(TransversalError::BudgetExceeded {
                subsets: combos,
                max: BUDGET,
            });
        }
        let mut found = None;
        for_each_subset(w, k, |s| {
            if found.is_none() && m.iter().all(|row| s.iter().any(|&j| row[j])) {
                found = Some(s.to_vec());
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
