use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::HypergraphError;
use crate::combinatorics::for_each_subset;

/// Vertex limit from the bitmask edge index.
pub const MAX_VERTICES: usize = 128;

/// `h`-uniform hypergraph on `0..n`. Edges are stored sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphRepr", into = "HypergraphRepr")]
pub struct UniformHypergraph {
    h: usize,
    n: usize,
    edges: BTreeSet<Vec<usize>>,
    #[serde(skip)]
    index: HashSet<u128>,
}

#[derive(Serialize, Deserialize)]
struct HypergraphRepr {
    h: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<HypergraphRepr> for UniformHypergraph {
    type Error = HypergraphError;

    fn try_from(r: HypergraphRepr) -> Result<Self, Self::Error> {
        UniformHypergraph::new(r.h, r.n, r.edges)
    }
}

impl From<UniformHypergraph> for HypergraphRepr {
    fn from(g: UniformHypergraph) -> Self {
        HypergraphRepr {
            h: g.h,
            n: g.n,
            edges: g.edges.into_iter().collect(),
        }
    }
}

#[inline]
fn mask(vs: &[usize]) -> u128 {
    vs.iter().fold(0u128, |m, &v| m | 1u128 << v)
}

impl UniformHypergraph {
    pub fn empty(h: usize, n: usize) -> Result<Self, HypergraphError> {
        Self::new(h, n, Vec::new())
    }

    pub fn new(h: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        if h == 0 {
            return Err(HypergraphError::InvalidEdge(
                "uniformity must be positive".into(),
            ));
        }
        if n > MAX_VERTICES {
            return Err(HypergraphError::TooLarge(format!(
                "{n} vertices exceed {MAX_VERTICES}"
            )));
        }
        let mut g = Self {
            h,
            n,
            edges: BTreeSet::new(),
            index: HashSet::new(),
        };
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    /// Complete `h`-uniform hypergraph on `n` vertices.
    pub fn complete(h: usize, n: usize) -> Result<Self, HypergraphError> {
        let mut g = Self::empty(h, n)?;
        for_each_subset(n, h, |s| {
            g.index.insert(mask(s));
            g.edges.insert(s.to_vec());
        });
        Ok(g)
    }

    pub fn add_edge(&mut self, mut e: Vec<usize>) -> Result<bool, HypergraphError> {
        e.sort_unstable();
        e.dedup();
        if e.len() != self.h || e.iter().any(|&v| v >= self.n) {
            return Err(HypergraphError::InvalidEdge(format!(
                "{e:?} is not {} distinct vertices below {}",
                self.h, self.n
            )));
        }
        self.index.insert(mask(&e));
        Ok(self.edges.insert(e))
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.edges.iter()
    }

    /// Edge test for any vertex order; repeated vertices never form an edge.
    pub fn contains(&self, vs: &[usize]) -> bool {
        let m = mask(vs);
        m.count_ones() as usize == self.h && self.index.contains(&m)
    }

    /// Fraction of all `h`-subsets that are edges.
    pub fn density(&self) -> f64 {
        let total = crate::combinatorics::binomial(self.n as u64, self.h as u64);
        if total == 0 {
            0.0
        } else {
            self.edges.len() as f64 / total as f64
        }
    }
}

/// Copy of the complete `h`-partite `h`-uniform hypergraph with classes
/// of size `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartiteCopy {
    pub classes: Vec<Vec<usize>>,
}

impl PartiteCopy {
    /// Sorted classes, ordered by smallest element.
    pub fn canonical(&self) -> Self {
        let mut classes: Vec<Vec<usize>> = self
            .classes
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort();
        Self { classes }
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.classes.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// Every transversal is an edge and the classes are disjoint.
    pub fn verify(&self, g: &UniformHypergraph) -> bool {
        let all = self.vertices();
        let mut dedup = all.clone();
        dedup.dedup();
        if dedup.len() != all.len() || self.classes.len() != g.h() {
            return false;
        }
        let mut pick = vec![0usize; self.classes.len()];
        loop {
            let e: Vec<usize> = pick.iter().zip(&self.classes).map(|(&i, c)| c[i]).collect();
            if !g.contains(&e) {
                return false;
            }
            let mut k = 0;
            while k < pick.len() {
                pick[k] += 1;
                if pick[k] < self.classes[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                return true;
            }
        }
    }
}

/// Exact number of unordered copies of `L_h(m)`: vertex sets of size
/// `h m` times their partitions into `h` classes whose transversals are
/// all edges.
pub fn count_partite_copies(g: &UniformHypergraph, m: usize) -> Result<u64, HypergraphError> {
    let h = g.h();
    if g.n() > 30 || h > 3 || m > 2 || m == 0 {
        return Err(HypergraphError::TooLarge(format!(
            "exhaustive count needs n <= 30, h <= 3, 1 <= m <= 2 (got n={}, h={h}, m={m})",
            g.n()
        )));
    }
    let mut count = 0u64;
    let mut classes: Vec<Vec<usize>> = vec![Vec::with_capacity(m); h];
    for_each_subset(g.n(), h * m, |vs| {
        count += count_partitions(g, vs, m, &mut classes, 0);
    });
    Ok(count)
}

/// Assigns `vs[pos..]` to classes; a vertex may open a new class only
/// after every earlier class is nonempty, so classes stay ordered by
/// their smallest element and each partition is visited once.
fn count_partitions(
    g: &UniformHypergraph,
    vs: &[usize],
    m: usize,
    classes: &mut [Vec<usize>],
    pos: usize,
) -> u64 {
    if pos == vs.len() {
        let copy = PartiteCopy {
            classes: classes.to_vec(),
        };
        return copy.verify(g) as u64;
    }
    let mut total = 0;
    for c in 0..classes.len() {
        if classes[c].len() < m {
            let opening = classes[c].is_empty();
            classes[c].push(vs[pos]);
            total += count_partitions(g, vs, m, classes, pos + 1);
            classes[c].pop();
            if opening {
                break;
            }
        }
    }
    total
}

/// Randomized backtracking search for a copy of `L_h(m)` containing the
/// seed edge. `budget` caps the number of candidate tests; `None` means
/// no copy was found, not that none exists.
pub fn find_partite_copy_from(
    g: &UniformHypergraph,
    seed: &[usize],
    m: usize,
    budget: usize,
    rng: &mut impl Rng,
) -> Option<PartiteCopy> {
    if !g.contains(seed) || m == 0 {
        return None;
    }
    let mut classes: Vec<Vec<usize>> = seed.iter().map(|&v| vec![v]).collect();
    let mut used: u128 = mask(seed);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    let mut spent = 0usize;
    if extend(g, &mut classes, &mut used, m, &order, budget, &mut spent) {
        let copy = PartiteCopy { classes }.canonical();
        debug_assert!(copy.verify(g));
        Some(copy)
    } else {
        None
    }
}

fn compatible(g: &UniformHypergraph, classes: &[Vec<usize>], class: usize, v: usize) -> bool {
    let h = classes.len();
    let mut pick = vec![0usize; h];
    let mut e = vec![0usize; h];
    loop {
        for k in 0..h {
            e[k] = if k == class { v } else { classes[k][pick[k]] };
        }
        if !g.contains(&e) {
            return false;
        }
        let mut k = 0;
        while k < h {
            if k != class {
                pick[k] += 1;
                if pick[k] < classes[k].len() {
                    break;
                }
                pick[k] = 0;
            }
            k += 1;
        }
        if k == h {
            return true;
        }
    }
}

fn extend(
    g: &UniformHypergraph,
    classes: &mut Vec<Vec<usize>>,
    used: &mut u128,
    m: usize,
    order: &[usize],
    budget: usize,
    spent: &mut usize,
) -> bool {
    // fill the smallest class first
    let Some(class) = (0..classes.len())
        .filter(|&c| classes[c].len() < m)
        .min_by_key(|&c| classes[c].len())
    else {
        return true;
    };
    for &v in order {
        if *used >> v & 1 == 1 {
            continue;
        }
        if *spent >= budget {
            return false;
        }
        *spent += 1;
        if compatible(g, classes, class, v) {
            classes[class].push(v);
            *used |= 1u128 << v;
            if extend(g, classes, used, m, order, budget, spent) {
                return true;
            }
            classes[class].pop();
            *used &= !(1u128 << v);
        }
    }
    false
}

/// Tries seeds in random order until a copy appears or the budget is spent.
pub fn find_partite_copy(
    g: &UniformHypergraph,
    m: usize,
    budget: usize,
    rng: &mut impl Rng,
) -> Option<PartiteCopy> {
    let mut seeds: Vec<&Vec<usize>> = g.edges().collect();
    seeds.shuffle(rng);
    let mut left = budget;
    for s in seeds {
        if left == 0 {
            break;
        }
        let share = left.min(budget / 8 + 1);
        if let Some(c) = find_partite_copy_from(g, s, m, share, rng) {
            return Some(c);
        }
        left -= share;
    }
    None
}
