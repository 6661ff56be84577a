use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::TransversalError;
use crate::combinatorics::{binomial, for_each_subset};
use crate::geometry::Family;
use crate::select::{Evaluator, Measure, MAX_TUPLES};

/// Cap on the number of `p`-subsets enumerated.
pub const MAX_P_SUBSETS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PqCheck {
    pub holds: bool,
    pub p: usize,
    /// `d(p-1) + 1`, the hypothesis arity for the multiset family.
    pub p_tilde: u64,
    /// `alpha = 1 / alpha_den` with `alpha_den = p~ (p~-1) ... (p~-d)`.
    pub alpha_den: u128,
    pub alpha: f64,
    pub subsets_checked: u128,
    pub good_subsets: usize,
    /// First `p`-subset without a good `(d+1)`-subset.
    pub violation: Option<Vec<usize>>,
}

/// `p~ = d(p-1) + 1` and the falling product `p~ (p~-1) ... (p~-d)`.
pub fn pq_constants(p: usize, d: usize) -> (u64, u128) {
    let pt = (d * p.saturating_sub(1) + 1) as u64;
    let den = (0..=d as u64).fold(1u128, |acc, k| {
        acc.saturating_mul(pt.saturating_sub(k) as u128)
    });
    (pt, den)
}

/// Among every `p` members, do some `d+1` meet in volume at least
/// `threshold - tol`?
pub fn pq_hypothesis_check(
    family: &Family,
    p: usize,
    threshold: f64,
    tol: f64,
) -> Result<PqCheck, TransversalError> {
    pq_hypothesis_measure(family, p, Measure::Volume, threshold, tol)
}

/// [`pq_hypothesis_check`] for any measure.
pub fn pq_hypothesis_measure(
    family: &Family,
    p: usize,
    measure: Measure,
    threshold: f64,
    tol: f64,
) -> Result<PqCheck, TransversalError> {
    let d = family.dim();
    let q = d + 1;
    let n = family.len();
    if p < q {
        return Err(TransversalError::InvalidParameter(format!(
            "p = {p} is below d + 1 = {q}"
        )));
    }
    if n > 128 {
        return Err(TransversalError::BudgetExceeded {
            subsets: n as u128,
            max: 128,
        });
    }
    let subsets = binomial(n as u64, p as u64);
    if subsets > MAX_P_SUBSETS {
        return Err(TransversalError::BudgetExceeded {
            subsets,
            max: MAX_P_SUBSETS,
        });
    }
    let qs = binomial(n as u64, q as u64);
    if qs > MAX_TUPLES {
        return Err(TransversalError::BudgetExceeded {
            subsets: qs,
            max: MAX_TUPLES,
        });
    }
    let ev = Evaluator::new(family, measure)?;
    let mut all = Vec::new();
    for_each_subset(n, q, |s| all.push(s.to_vec()));
    let flags = crate::par::map(&all, |s| ev.of(s) >= threshold - tol);
    let good: HashSet<u128> = all
        .iter()
        .zip(flags)
        .filter(|(_, g)| *g)
        .map(|(s, _)| s.iter().fold(0u128, |m, &i| m | 1 << i))
        .collect();
    let mut violation = None;
    for_each_subset(n, p, |s| {
        if violation.is_some() {
            return;
        }
        let mut hit = false;
        for_each_subset(p, q, |sub| {
            hit = hit || good.contains(&sub.iter().fold(0u128, |m, &i| m | 1 << s[i]));
        });
        if !hit {
            violation = Some(s.to_vec());
        }
    });
    let (p_tilde, alpha_den) = pq_constants(p, d);
    Ok(PqCheck {
        holds: violation.is_none(),
        p,
        p_tilde,
        alpha_den,
        alpha: 1.0 / alpha_den as f64,
        subsets_checked: subsets,
        good_subsets: good.len(),
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexBody;

    #[test]
    fn constants_for_p4_d2() {
        assert_eq!(pq_constants(4, 2), (7, 210));
        assert_eq!(pq_constants(3, 2), (5, 60));
        assert_eq!(pq_constants(2, 1), (2, 2));
    }

    #[test]
    fn p_equal_q_needs_every_triple() {
        let mut m = vec![ConvexBody::cube(2, 0.0, 1.0); 4];
        let f = Family::new(2, m.clone()).unwrap();
        assert!(pq_hypothesis_check(&f, 3, 1.0, 1e-9).unwrap().holds);
        m[3] = ConvexBody::cube(2, 5.0, 1.0);
        let f = Family::new(2, m).unwrap();
        let c = pq_hypothesis_check(&f, 3, 1.0, 1e-9).unwrap();
        assert_eq!(c.violation, Some(vec![0, 1, 3]));
        // any 4 members still contain the good triple {0, 1, 2}
        assert!(pq_hypothesis_check(&f, 4, 1.0, 1e-9).unwrap().holds);
    }
}
