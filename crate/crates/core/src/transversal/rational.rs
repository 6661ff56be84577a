use serde::{Deserialize, Serialize};

use super::programs::FractionalAssignment;
use super::TransversalError;
use crate::combinatorics::lcm;
use crate::geometry::Family;

pub const DEFAULT_MAX_DEN: u64 = 1_000_000;

/// Largest multiset `materialize` will build.
pub const MAX_EXPANDED: u64 = 1_000_000;

/// Best rational approximation `p/q` of `x >= 0` with `q <= max_den`,
/// from the continued fraction expansion and its semiconvergents.
pub fn rationalize(x: f64, max_den: u64) -> (u64, u64) {
    assert!(x >= 0.0 && x.is_finite() && max_den >= 1);
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    loop {
        let a = r.floor();
        if a > u64::MAX as f64 / 2.0 {
            break;
        }
        let a = a as u64;
        let Some(q2) = a.checked_mul(q1).and_then(|v| v.checked_add(q0)) else {
            break;
        };
        if q2 > max_den {
            // largest semiconvergent within the bound, if it beats p1/q1
            let k = (max_den - q0) / q1;
            let (ps, qs) = (p0 + k * p1, q0 + k * q1);
            if qs > 0 && (x - ps as f64 / qs as f64).abs() < (x - p1 as f64 / q1 as f64).abs() {
                return (ps, qs);
            }
            break;
        }
        let p2 = a * p1 + p0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac <= 1e-15 * r.max(1.0) {
            break;
        }
        r = 1.0 / frac;
    }
    (p1, q1)
}

/// Multiset with `multiplicities[i] = m(C_i) * denominator` copies of
/// each member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandedFamily {
    pub multiplicities: Vec<u64>,
    pub denominator: u64,
    pub total: u64,
    /// Weights as `(numerator, denominator)` pairs.
    pub rationals: Vec<(u64, u64)>,
}

impl ExpandedFamily {
    /// The multiset as a family, members repeated in order.
    pub fn materialize(&self, family: &Family) -> Result<Family, TransversalError> {
        if self.total > MAX_EXPANDED {
            return Err(TransversalError::DenominatorOverflow(format!(
                "{} copies exceed {MAX_EXPANDED}",
                self.total
            )));
        }
        let members = family
            .members()
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(b, &k)| std::iter::repeat_n(b.clone(), k as usize))
            .collect();
        Ok(Family::with_radius(
            family.dim(),
            members,
            family.bounding_radius(),
        )?)
    }

    /// Largest number of copies containing one witness, per the
    /// containment matrix of the original family.
    pub fn max_load(&self, containment: &[Vec<bool>]) -> u64 {
        let witnesses = containment.first().map_or(0, Vec::len);
        (0..witnesses)
            .map(|j| {
                containment
                    .iter()
                    .zip(&self.multiplicities)
                    .filter(|(row, _)| row[j])
                    .map(|(_, &k)| k)
                    .sum()
            })
            .max()
            .unwrap_or(0)
    }
}

/// Rounds matching weights to fractions with denominators at most
/// `max_den` and scales by their common denominator.
pub fn multiset_expand(
    family: &Family,
    m: &FractionalAssignment,
    max_den: u64,
) -> Result<ExpandedFamily, TransversalError> {
    if m.weights.len() != family.len() {
        return Err(TransversalError::InvalidParameter(format!(
            "{} weights for {} members",
            m.weights.len(),
            family.len()
        )));
    }
    if max_den == 0 {
        return Err(TransversalError::InvalidParameter(
            "max_den must be positive".into(),
        ));
    }
    if let Some(w) = m.weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
        return Err(TransversalError::InvalidParameter(format!(
            "weight {w} is not a nonnegative number"
        )));
    }
    let rationals: Vec<(u64, u64)> = m.weights.iter().map(|&w| rationalize(w, max_den)).collect();
    let mut den: u128 = 1;
    for &(_, q) in &rationals {
        den = lcm(den, q as u128)
            .filter(|&l| l <= u64::MAX as u128)
            .ok_or_else(|| {
                TransversalError::DenominatorOverflow(format!("lcm beyond {}", u64::MAX))
            })?;
    }
    let mut total: u128 = 0;
    let multiplicities = rationals
        .iter()
        .map(|&(p, q)| {
            let k = p as u128 * (den / q as u128);
            total += k;
            u64::try_from(k)
                .map_err(|_| TransversalError::DenominatorOverflow(format!("multiplicity {k}")))
        })
        .collect::<Result<Vec<u64>, _>>()?;
    let total = u64::try_from(total)
        .map_err(|_| TransversalError::DenominatorOverflow(format!("total {total}")))?;
    Ok(ExpandedFamily {
        multiplicities,
        denominator: den as u64,
        total,
        rationals,
    })
}
