use serde::{Deserialize, Serialize};

use super::witness::{containment_matrix, WitnessSet};
use super::TransversalError;
use crate::geometry::Family;
use crate::lp::{LinearProgram, Relation, Sense};

/// LP solution: weights per witness (transversals) or per member
/// (matchings).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalAssignment {
    pub weights: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

impl FractionalAssignment {
    fn from_lp(x: Vec<f64>, pivots: usize) -> Self {
        let weights: Vec<f64> = x.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Self {
            objective: weights.iter().sum(),
            weights,
            pivots,
        }
    }
}

/// Minimum total witness weight with every member holding weight at
/// least 1.
pub fn frac_transversal_lp(
    family: &Family,
    w: &WitnessSet,
    tol: f64,
) -> Result<FractionalAssignment, TransversalError> {
    frac_transversal_matrix(&containment_matrix(family, w, tol), w.len())
}

pub fn frac_transversal_matrix(
    m: &[Vec<bool>],
    witnesses: usize,
) -> Result<FractionalAssignment, TransversalError> {
    if let Some(member) = m.iter().position(|row| !row.iter().any(|&b| b)) {
        return Err(TransversalError::Uncovered { member });
    }
    let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0; witnesses]);
    for row in m {
        lp.add(
            row.iter().map(|&b| b as u8 as f64).collect(),
            Relation::Ge,
            1.0,
        )?;
    }
    let sol = lp.solve()?;
    Ok(FractionalAssignment::from_lp(sol.x, sol.pivots))
}

/// Maximum total member weight, at most 1 each, with every witness
/// lying in members of total weight at most 1.
pub fn frac_matching_lp(
    family: &Family,
    w: &WitnessSet,
    tol: f64,
) -> Result<FractionalAssignment, TransversalError> {
    frac_matching_matrix(&containment_matrix(family, w, tol), w.len())
}

pub fn frac_matching_matrix(
    m: &[Vec<bool>],
    witnesses: usize,
) -> Result<FractionalAssignment, TransversalError> {
    let n = m.len();
    let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0; n]);
    for j in 0..witnesses {
        lp.add(
            m.iter().map(|row| row[j] as u8 as f64).collect(),
            Relation::Le,
            1.0,
        )?;
    }
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[i] = 1.0;
        lp.add(row, Relation::Le, 1.0)?;
    }
    let sol = lp.solve()?;
    Ok(FractionalAssignment::from_lp(sol.x, sol.pivots))
}
