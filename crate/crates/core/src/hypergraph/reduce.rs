use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::graph::{find_partite_copy_from, PartiteCopy, UniformHypergraph};
use super::HypergraphError;
use crate::combinatorics::{binomial, for_each_subset};
use crate::geometry::Family;
use crate::select::{Evaluator, Measure, SelectError, MAX_TUPLES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReduceOptions {
    /// Measure and threshold defining the `(d+1)`-uniform hypergraph.
    pub measure: Measure,
    pub threshold: f64,
    /// Class size of the partite copies sought.
    pub n_class: usize,
    /// Volume threshold for the `2d`-uniform output edges.
    pub delta: f64,
    /// Candidate tests per restart.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self {
            measure: Measure::Volume,
            threshold: 1.0,
            n_class: 2,
            delta: 1.0,
            budget: 100_000,
            restarts: 64,
            seed: 0,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionOutcome {
    /// The `(d+1)`-uniform input hypergraph.
    pub h: UniformHypergraph,
    /// The `2d`-uniform output; every edge has volume at least `delta`.
    pub h_prime: UniformHypergraph,
    pub copies: Vec<PartiteCopy>,
    pub restarts: usize,
}

/// `h`-subsets of the family whose intersection measures at least
/// `threshold - tol`.
pub fn good_hypergraph(
    ev: &Evaluator,
    h: usize,
    threshold: f64,
    tol: f64,
) -> Result<UniformHypergraph, HypergraphError> {
    let n = ev.len();
    let total = binomial(n as u64, h as u64);
    if total > MAX_TUPLES {
        return Err(SelectError::FamilyTooLarge {
            tuples: total,
            max: MAX_TUPLES,
        }
        .into());
    }
    let mut subsets = Vec::with_capacity(total as usize);
    for_each_subset(n, h, |s| subsets.push(s.to_vec()));
    let good = crate::par::map(&subsets, |s| ev.of(s) >= threshold - tol);
    let edges = subsets
        .into_iter()
        .zip(good)
        .filter_map(|(s, g)| g.then_some(s))
        .collect();
    UniformHypergraph::new(h, n, edges)
}

/// Builds the good-tuple hypergraph of the family and reduces it.
pub fn reduce_d1_to_2d(
    family: &Family,
    opts: &ReduceOptions,
) -> Result<ReductionOutcome, HypergraphError> {
    let ev = Evaluator::new(family, opts.measure)?;
    let h = good_hypergraph(&ev, family.dim() + 1, opts.threshold, opts.tol)?;
    reduce_with_hypergraph(family, &h, opts)
}

/// Searches `h` for copies of `L_{d+1}(N)` from random seed edges and
/// adds every `2d`-subset of each copy's vertex set whose intersection
/// volume reaches `delta`.
pub fn reduce_with_hypergraph(
    family: &Family,
    h: &UniformHypergraph,
    opts: &ReduceOptions,
) -> Result<ReductionOutcome, HypergraphError> {
    let d = family.dim();
    let n = family.len();
    if h.h() != d + 1 || h.n() != n {
        return Err(HypergraphError::InvalidParameter(format!(
            "hypergraph is {}-uniform on {} vertices, family needs {}-uniform on {n}",
            h.h(),
            h.n(),
            d + 1
        )));
    }
    if opts.n_class == 0 {
        return Err(HypergraphError::InvalidParameter(
            "class size must be positive".into(),
        ));
    }
    let need = (d + 1) * opts.n_class;
    if n < need {
        return Err(HypergraphError::TooFewMembers { n, need });
    }
    let ev = Evaluator::new(family, Measure::Volume)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seeds: Vec<(u64, Vec<usize>)> = Vec::new();
    let mut edges: Vec<&Vec<usize>> = h.edges().collect();
    edges.shuffle(&mut rng);
    for (i, e) in edges.into_iter().take(opts.restarts).enumerate() {
        seeds.push((i as u64, e.clone()));
    }
    let found = crate::par::map(&seeds, |(stream, e)| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(stream + 1);
        find_partite_copy_from(h, e, opts.n_class, opts.budget, &mut rng)
    });
    let copies: BTreeSet<PartiteCopy> = found.into_iter().flatten().collect();
    log::info!(
        "{} distinct copies from {} restarts",
        copies.len(),
        seeds.len()
    );
    if copies.is_empty() {
        return Err(HypergraphError::NoCopies {
            restarts: seeds.len(),
        });
    }
    let mut h_prime = UniformHypergraph::empty(2 * d, n)?;
    let mut seen: HashMap<Vec<usize>, bool> = HashMap::new();
    for c in &copies {
        let vs = c.vertices();
        for_each_subset(vs.len(), 2 * d, |sub| {
            let idx: Vec<usize> = sub.iter().map(|&i| vs[i]).collect();
            let good = *seen
                .entry(idx.clone())
                .or_insert_with(|| ev.of(&idx) >= opts.delta);
            if good {
                h_prime.add_edge(idx).expect("distinct vertices");
            }
        });
    }
    Ok(ReductionOutcome {
        h: h.clone(),
        h_prime,
        copies: copies.into_iter().collect(),
        restarts: seeds.len(),
    })
}
