use serde::{Deserialize, Serialize};

use super::measure::{Evaluator, Measure};
use super::SelectError;
use crate::combinatorics::for_each_subset;
use crate::geometry::Family;

/// Largest family size for exhaustive subfamily search.
pub const MAX_BRUTE_FORCE_N: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HellyCheck {
    /// Every `arity`-subset reaches the threshold.
    pub all_subsets_pass: bool,
    pub weakest_subset: f64,
    /// Measure of the whole intersection.
    pub full_measure: f64,
}

/// Tests all `arity`-subsets (default `2d`) against the threshold and
/// measures the whole intersection.
pub fn quantitative_helly_check(
    family: &Family,
    threshold: f64,
    arity: Option<usize>,
    tol: f64,
) -> Result<HellyCheck, SelectError> {
    let ev = Evaluator::new(family, Measure::Volume)?;
    let k = arity.unwrap_or(2 * family.dim());
    let n = family.len();
    if n < k {
        return Err(SelectError::TooFewMembers { n, need: k });
    }
    let mut weakest = f64::INFINITY;
    for_each_subset(n, k, |s| weakest = weakest.min(ev.of(s)));
    let all: Vec<usize> = (0..n).collect();
    Ok(HellyCheck {
        all_subsets_pass: weakest >= threshold - tol,
        weakest_subset: weakest,
        full_measure: ev.of(&all),
    })
}

/// Largest subfamily whose intersection reaches `threshold - tol`;
/// lexicographically smallest among the largest.
pub fn brute_force_best_subfamily(
    family: &Family,
    threshold: f64,
    tol: f64,
) -> Result<Vec<usize>, SelectError> {
    let ev = Evaluator::new(family, Measure::Volume)?;
    brute_force_best_with(&ev, threshold, tol)
}

pub fn brute_force_best_with(
    ev: &Evaluator,
    threshold: f64,
    tol: f64,
) -> Result<Vec<usize>, SelectError> {
    let n = ev.len();
    if n > MAX_BRUTE_FORCE_N {
        return Err(SelectError::FamilyTooLarge {
            tuples: 1u128 << n,
            max: 1u128 << MAX_BRUTE_FORCE_N,
        });
    }
    for k in (1..=n).rev() {
        let mut found = None;
        for_each_subset(n, k, |s| {
            if found.is_none() && ev.of(s) >= threshold - tol {
                found = Some(s.to_vec());
            }
        });
        if let Some(s) = found {
            return Ok(s);
        }
    }
    Ok(Vec::new())
}

/// Optimal fractional Helly fraction `1 - (1 - alpha)^{1/(d+1)}`.
pub fn fractional_helly_baseline(alpha: f64, d: usize) -> Result<f64, SelectError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SelectError::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1]"
        )));
    }
    Ok(1.0 - (1.0 - alpha).powf(1.0 / (d as f64 + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, Halfspace};

    #[test]
    fn baseline_values() {
        assert_eq!(fractional_helly_baseline(1.0, 3).unwrap(), 1.0);
        assert!((fractional_helly_baseline(0.75, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((fractional_helly_baseline(0.271, 2).unwrap() - 0.1).abs() < 1e-12);
        assert!(fractional_helly_baseline(0.0, 2).is_err());
        assert!(fractional_helly_baseline(1.5, 2).is_err());
    }

    #[test]
    fn square_sides_pass_four_wise() {
        let hs = [
            Halfspace::axis_upper(2, 0, 1.0),
            Halfspace::axis_lower(2, 0, 0.0),
            Halfspace::axis_upper(2, 1, 1.0),
            Halfspace::axis_lower(2, 1, 0.0),
        ];
        let f = Family::new(
            2,
            hs.iter()
                .map(|h| ConvexBody::halfspace(h.clone()).unwrap())
                .collect(),
        )
        .unwrap();
        let c = quantitative_helly_check(&f, 1.0, None, 1e-9).unwrap();
        assert!(c.all_subsets_pass);
        assert!((c.full_measure - 1.0).abs() < 1e-12);
        let three = quantitative_helly_check(&f, 1.0, Some(3), 1e-9).unwrap();
        assert!(three.all_subsets_pass && three.weakest_subset.is_infinite());
    }

    #[test]
    fn brute_force_extremes() {
        let disjoint = Family::new(
            2,
            (0..4)
                .map(|i| ConvexBody::cube(2, 3.0 * i as f64, 1.0))
                .collect(),
        )
        .unwrap();
        assert_eq!(
            brute_force_best_subfamily(&disjoint, 1.0, 1e-9).unwrap(),
            vec![0]
        );
        let same = Family::new(2, vec![ConvexBody::cube(2, 0.0, 1.0); 5]).unwrap();
        assert_eq!(
            brute_force_best_subfamily(&same, 1.0, 1e-9).unwrap().len(),
            5
        );
        let big = Family::new(2, vec![ConvexBody::cube(2, 0.0, 1.0); 16]).unwrap();
        assert!(brute_force_best_subfamily(&big, 1.0, 1e-9).is_err());
    }
}
