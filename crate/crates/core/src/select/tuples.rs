use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::covering::covering_for;
use super::measure::{Evaluator, Measure};
use super::SelectError;
use crate::combinatorics::{binomial, for_each_subset};
use crate::geometry::Family;
use crate::par;

/// Largest number of `2d`-tuples enumerated (all 4-subsets of 60 members).
pub const MAX_TUPLES: u128 = 487_635;

/// Ties between covering values closer than this count as equal.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodTuple {
    pub members: Vec<usize>,
    /// The `(2d-1)`-subset with the highest covering halfspace.
    pub assigned: Vec<usize>,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodTupleTable {
    pub d: usize,
    pub n: usize,
    pub measure: Measure,
    pub threshold: f64,
    pub total: u128,
    pub tuples: Vec<GoodTuple>,
}

impl GoodTupleTable {
    /// Fraction of all `2d`-tuples that are good.
    pub fn alpha(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.tuples.len() as f64 / self.total as f64
        }
    }

    /// Number of good tuples assigned to each `(2d-1)`-subset.
    pub fn popularity(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut m = BTreeMap::new();
        for g in &self.tuples {
            *m.entry(g.assigned.clone()).or_insert(0) += 1;
        }
        m
    }
}

pub fn enumerate_good_tuples(
    family: &Family,
    threshold: f64,
    tol: f64,
) -> Result<GoodTupleTable, SelectError> {
    let ev = Evaluator::new(family, Measure::Volume)?;
    enumerate_good_tuples_with(&ev, threshold, tol)
}

/// Tests all `2d`-subsets against `measure >= threshold - tol` and assigns
/// each good one the `(2d-1)`-subset of largest covering value (smallest
/// subset in lexicographic order on ties).
pub fn enumerate_good_tuples_with(
    ev: &Evaluator,
    threshold: f64,
    tol: f64,
) -> Result<GoodTupleTable, SelectError> {
    let d = ev.dim();
    let n = ev.len();
    let k = 2 * d;
    if n < k {
        return Err(SelectError::TooFewMembers { n, need: k });
    }
    let total = binomial(n as u64, k as u64);
    if total > MAX_TUPLES {
        return Err(SelectError::FamilyTooLarge {
            tuples: total,
            max: MAX_TUPLES,
        });
    }
    log::info!("testing {total} tuples of size {k}");
    let firsts: Vec<usize> = (0..=n - k).collect();
    let blocks = par::map(&firsts, |&first| {
        let mut found = Vec::new();
        let rest = n - first - 1;
        let mut tuple = vec![first; k];
        for_each_subset(rest, k - 1, |s| {
            for (slot, &v) in tuple[1..].iter_mut().zip(s) {
                *slot = first + 1 + v;
            }
            if ev.of(&tuple) >= threshold - tol {
                found.push(tuple.clone());
            }
        });
        found
    });
    let good: Vec<Vec<usize>> = blocks.into_iter().flatten().collect();
    let mut subsets = BTreeSet::new();
    for g in &good {
        for skip in 0..k {
            let mut j = g.clone();
            j.remove(skip);
            subsets.insert(j);
        }
    }
    let subsets: Vec<Vec<usize>> = subsets.into_iter().collect();
    log::info!(
        "{} good tuples, {} covering halfspaces",
        good.len(),
        subsets.len()
    );
    let ts = par::map(&subsets, |j| {
        covering_for(
            ev.measure(),
            d,
            &ev.collect(j, &[]),
            threshold,
            tol,
            ev.clip_radius(),
        )
        .map(|c| c.t)
    });
    let mut t_of: BTreeMap<&[usize], f64> = BTreeMap::new();
    for (j, t) in subsets.iter().zip(ts) {
        t_of.insert(j.as_slice(), t?);
    }
    let mut tuples = Vec::with_capacity(good.len());
    for g in good {
        let mut best: Option<(Vec<usize>, f64)> = None;
        for_each_subset(k, k - 1, |pos| {
            let j: Vec<usize> = pos.iter().map(|&p| g[p]).collect();
            let t = t_of[j.as_slice()];
            if best.as_ref().is_none_or(|(_, bt)| t > bt + TIE_TOL) {
                best = Some((j, t));
            }
        });
        let (assigned, t) = best.expect("tuple has subsets");
        tuples.push(GoodTuple {
            members: g,
            assigned,
            t,
        });
    }
    Ok(GoodTupleTable {
        d,
        n,
        measure: ev.measure(),
        threshold,
        total,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, Halfspace};

    #[test]
    fn identical_cubes_are_all_good() {
        let f = Family::new(2, vec![ConvexBody::cube(2, 0.0, 1.0); 6]).unwrap();
        let t = enumerate_good_tuples(&f, 1.0, 1e-9).unwrap();
        assert_eq!(t.tuples.len(), 15);
        assert!(t.tuples.iter().all(|g| (g.t - t.tuples[0].t).abs() < 1e-12));
        assert!(t.tuples.iter().all(|g| g.assigned == g.members[..3]));
    }

    #[test]
    fn square_halfplanes_give_one_tuple() {
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
        let t = enumerate_good_tuples(&f, 1.0, 1e-9).unwrap();
        assert_eq!(t.tuples.len(), 1);
        assert_eq!(t.total, 1);
    }

    #[test]
    fn too_many_members_is_refused() {
        let f = Family::new(2, vec![ConvexBody::cube(2, 0.0, 1.0); 61]).unwrap();
        assert!(matches!(
            enumerate_good_tuples(&f, 1.0, 1e-9),
            Err(SelectError::FamilyTooLarge { .. })
        ));
    }
}
