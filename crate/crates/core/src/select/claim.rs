use serde::{Deserialize, Serialize};

use super::covering::covering_for;
use super::measure::Evaluator;
use super::tuples::TIE_TOL;
use crate::geometry::Halfspace;

/// First failing 2d-subset of `{H0, K} ∪ J0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimFailure {
    /// 1: `{H0} ∪ J0`; 2: `{K} ∪ J0`; 3: `{H0, K} ∪ J0 \ {D}`.
    pub case: u8,
    /// Member omitted in case 3.
    pub dropped: Option<usize>,
    pub value: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub k: usize,
    /// Measures of every 2d-subset checked, in case order.
    pub values: Vec<f64>,
    pub failure: Option<ClaimFailure>,
}

impl ClaimOutcome {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that every `2d`-subset of `{H0, K} ∪ J0` reaches
/// `threshold - tol`. Subsets dropping some `D ∈ J0` must also have a
/// covering value no higher than `t0`, so that `H1 ⊂ H0`.
pub fn claim_verify(
    ev: &Evaluator,
    j0: &[usize],
    k: usize,
    h0: &Halfspace,
    threshold: f64,
    tol: f64,
) -> ClaimOutcome {
    let need = threshold - tol;
    let mut values = Vec::with_capacity(j0.len() + 2);
    let fail = |case, dropped, value, detail: String, values: Vec<f64>| ClaimOutcome {
        k,
        values,
        failure: Some(ClaimFailure {
            case,
            dropped,
            value,
            detail,
        }),
    };
    let v1 = ev.of_with(j0, std::slice::from_ref(h0));
    values.push(v1);
    if !(v1 >= need) {
        return fail(1, None, v1, format!("measure {v1} below {need}"), values);
    }
    let mut with_k: Vec<usize> = j0.to_vec();
    with_k.push(k);
    let v2 = ev.of(&with_k);
    values.push(v2);
    if !(v2 >= need) {
        return fail(2, None, v2, format!("measure {v2} below {need}"), values);
    }
    let t0 = h0.offset;
    for &dropped in j0 {
        let j1: Vec<usize> = with_k.iter().copied().filter(|&i| i != dropped).collect();
        let t1 = covering_for(
            ev.measure(),
            ev.dim(),
            &ev.collect(&j1, &[]),
            threshold,
            tol,
            ev.clip_radius(),
        )
        .map(|c| c.t)
        .unwrap_or(f64::INFINITY);
        let v = ev.of_with(&j1, std::slice::from_ref(h0));
        values.push(v);
        if t1 > t0 + TIE_TOL {
            return fail(
                3,
                Some(dropped),
                v,
                format!("covering value {t1} exceeds {t0}"),
                values,
            );
        }
        if !(v >= need) {
            return fail(
                3,
                Some(dropped),
                v,
                format!("measure {v} below {need}"),
                values,
            );
        }
    }
    ClaimOutcome {
        k,
        values,
        failure: None,
    }
}
