use serde::{Deserialize, Serialize};

use super::claim::{claim_verify, ClaimOutcome};
use super::covering::covering_for;
use super::measure::{Evaluator, Measure};
use super::tuples::{enumerate_good_tuples_with, GoodTupleTable};
use super::SelectError;
use crate::geometry::{ConvexBody, Family, Halfspace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectOptions {
    pub measure: Measure,
    /// Good-tuple threshold, also the covering target.
    pub threshold: f64,
    pub tol: f64,
    /// Relative slack of the greedy clustering step.
    pub epsilon: f64,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self {
            measure: Measure::Volume,
            threshold: 1.0,
            tol: 1e-9,
            epsilon: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub measure: Measure,
    pub threshold: f64,
    pub n: usize,
    pub d: usize,
    pub good_tuples: usize,
    pub total_tuples: u128,
    pub alpha: f64,
    pub j0: Vec<usize>,
    pub t0: f64,
    pub h0: Halfspace,
    pub f0: Vec<usize>,
    /// `H0 ∩ ∩ J0`.
    pub l: ConvexBody,
    /// Greedy floor `(1 - epsilon) min_{K in F0} measure(K ∩ L)`.
    pub tau: f64,
    pub selected: Vec<usize>,
    pub measured_volume: f64,
    pub claim_verified: bool,
    pub popularity: usize,
}

pub fn qfh2d_select(
    family: &Family,
    threshold: f64,
    tol: f64,
) -> Result<SelectionReport, SelectError> {
    select(
        family,
        &SelectOptions {
            threshold,
            tol,
            ..SelectOptions::default()
        },
    )
}

pub fn select(family: &Family, opts: &SelectOptions) -> Result<SelectionReport, SelectError> {
    let ev = Evaluator::new(family, opts.measure)?;
    let d = ev.dim();
    let n = ev.len();
    if n < 4 * d {
        return Err(SelectError::TooFewMembers { n, need: 4 * d });
    }
    let table = enumerate_good_tuples_with(&ev, opts.threshold, opts.tol)?;
    select_from_table(&ev, &table, opts).map(|(r, _)| r)
}

/// The selection pipeline on a precomputed tuple table; also returns the
/// claim outcome of every member of `F0`.
pub fn select_from_table(
    ev: &Evaluator,
    table: &GoodTupleTable,
    opts: &SelectOptions,
) -> Result<(SelectionReport, Vec<ClaimOutcome>), SelectError> {
    let d = ev.dim();
    let n = ev.len();
    if table.tuples.is_empty() {
        return Err(SelectError::NoGoodTuples);
    }
    let pop = table.popularity();
    // max count; BTreeMap order makes the first maximum the smallest subset
    let (j0, popularity) = pop
        .iter()
        .fold(None::<(&Vec<usize>, usize)>, |best, (j, &c)| match best {
            Some((_, bc)) if bc >= c => best,
            _ => Some((j, c)),
        })
        .map(|(j, c)| (j.clone(), c))
        .expect("nonempty table");
    let t0 = covering_for(
        opts.measure,
        d,
        &ev.collect(&j0, &[]),
        opts.threshold,
        opts.tol,
        ev.clip_radius(),
    )?
    .t;
    let h0 = Halfspace::axis_upper(d, d - 1, t0);
    let mut f0: Vec<usize> = table
        .tuples
        .iter()
        .filter(|g| g.assigned == j0)
        .map(|g| {
            *g.members
                .iter()
                .find(|m| !j0.contains(m))
                .expect("one extra member")
        })
        .collect();
    f0.sort_unstable();
    let claims: Vec<ClaimOutcome> = f0
        .iter()
        .map(|&k| claim_verify(ev, &j0, k, &h0, opts.threshold, opts.tol))
        .collect();
    if let Some(bad) = claims.iter().find(|c| !c.holds()) {
        let f = bad.failure.clone().expect("failure");
        return Err(SelectError::ClaimFailed {
            k: bad.k,
            case: f.case,
            subset: claim_subset(&j0, bad.k, f.case, f.dropped),
            detail: f.detail,
        });
    }
    let l_hs = ev.collect(&j0, std::slice::from_ref(&h0));
    let l = ConvexBody::hpolytope(d, l_hs.clone())?;
    let (tau, chosen) = greedy_cluster(ev, &j0, &h0, &f0, opts.epsilon);
    let mut selected: Vec<usize> = j0.iter().copied().chain(chosen).collect();
    selected.sort_unstable();
    let measured_volume = ev.of(&selected);
    let report = SelectionReport {
        measure: opts.measure,
        threshold: opts.threshold,
        n,
        d,
        good_tuples: table.tuples.len(),
        total_tuples: table.total,
        alpha: table.alpha(),
        j0,
        t0,
        h0,
        f0,
        l,
        tau,
        selected,
        measured_volume,
        claim_verified: true,
        popularity,
    };
    Ok((report, claims))
}

fn claim_subset(j0: &[usize], k: usize, case: u8, dropped: Option<usize>) -> Vec<String> {
    let mut out = Vec::new();
    if case != 2 {
        out.push("H0".to_string());
    }
    if case != 1 {
        out.push(k.to_string());
    }
    out.extend(
        j0.iter()
            .filter(|&&i| Some(i) != dropped)
            .map(|i| i.to_string()),
    );
    out
}

/// From each seed in `F0`, repeatedly adds the member keeping
/// `measure(L ∩ ∩S)` largest while it stays at least `tau`.
fn greedy_cluster(
    ev: &Evaluator,
    j0: &[usize],
    h0: &Halfspace,
    f0: &[usize],
    epsilon: f64,
) -> (f64, Vec<usize>) {
    if f0.is_empty() {
        return (0.0, Vec::new());
    }
    let extra = std::slice::from_ref(h0);
    let floor = f0
        .iter()
        .map(|&k| {
            let mut idx = j0.to_vec();
            idx.push(k);
            ev.of_with(&idx, extra)
        })
        .fold(f64::INFINITY, f64::min);
    let tau = (1.0 - epsilon) * floor;
    let seeds: Vec<usize> = f0.to_vec();
    let runs = crate::par::map(&seeds, |&seed| {
        let mut chosen = vec![seed];
        let mut idx: Vec<usize> = j0.iter().copied().chain([seed]).collect();
        let mut current = ev.of_with(&idx, extra);
        loop {
            let mut best: Option<(usize, f64)> = None;
            for &k in f0 {
                if chosen.contains(&k) {
                    continue;
                }
                idx.push(k);
                let v = ev.of_with(&idx, extra);
                idx.pop();
                if v >= tau && best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((k, v));
                }
            }
            match best {
                Some((k, v)) => {
                    chosen.push(k);
                    idx.push(k);
                    current = v;
                }
                None => break,
            }
        }
        (chosen, current)
    });
    let (chosen, _) = runs
        .into_iter()
        .fold(None::<(Vec<usize>, f64)>, |best, (c, v)| match &best {
            Some((bc, bv)) if bc.len() > c.len() || (bc.len() == c.len() && *bv >= v) => best,
            _ => Some((c, v)),
        })
        .expect("nonempty seeds");
    (tau, chosen)
}
