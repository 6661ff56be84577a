mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use helly_lab::combinatorics::for_each_subset;
use helly_lab::generators::random_boxes;
use helly_lab::geometry::{vertices, ConvexBody, Family};
use helly_lab::hypergraph::{
    count_partite_copies, find_partite_copy, reduce_d1_to_2d, sparsify, HypergraphError,
    RainbowTuple, ReduceOptions, UniformHypergraph,
};

fn random_hypergraph(rng: &mut ChaCha8Rng, h: usize, n: usize, p: f64) -> UniformHypergraph {
    let mut edges = Vec::new();
    for_each_subset(n, h, |s| {
        if rng.random::<f64>() < p {
            edges.push(s.to_vec());
        }
    });
    UniformHypergraph::new(h, n, edges).unwrap()
}

/// Every transversal of the classes is an edge, checked by brute force
/// over all `h`-subsets of the copy's vertices.
fn is_partite_copy(g: &UniformHypergraph, classes: &[Vec<usize>], m: usize) -> bool {
    let all: Vec<usize> = classes.iter().flatten().copied().collect();
    let mut sorted = all.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != all.len() || classes.len() != g.h() || classes.iter().any(|c| c.len() != m) {
        return false;
    }
    let class_of = |v: usize| classes.iter().position(|c| c.contains(&v)).unwrap();
    let mut ok = true;
    for_each_subset(all.len(), g.h(), |s| {
        let vs: Vec<usize> = s.iter().map(|&i| all[i]).collect();
        let mut cs: Vec<usize> = vs.iter().map(|&v| class_of(v)).collect();
        cs.sort_unstable();
        cs.dedup();
        if cs.len() == g.h() {
            ok &= g.contains(&vs);
        }
    });
    ok
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn found_copies_satisfy_the_definition(seed in any::<u64>(), h in 2usize..=3, m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_hypergraph(&mut rng, h, 14, 0.7);
        if let Some(c) = find_partite_copy(&g, m, 50_000, &mut rng) {
            prop_assert!(c.verify(&g));
            prop_assert!(is_partite_copy(&g, &c.classes, m));
        }
    }

    #[test]
    fn adding_an_edge_never_lowers_the_count(seed in any::<u64>(), h in 1usize..=3, m in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 9;
        let mut g = random_hypergraph(&mut rng, h, n, 0.5);
        let before = count_partite_copies(&g, m).unwrap();
        let mut e: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(e.as_mut_slice(), &mut rng);
        e.truncate(h);
        g.add_edge(e).unwrap();
        prop_assert!(count_partite_copies(&g, m).unwrap() >= before);
    }

    #[test]
    fn reduction_edges_reach_delta(seed in any::<u64>(), n in 12usize..=16) {
        let f = random_boxes(seed, 2, n).unwrap();
        let delta = percentile(kwise_volumes(&f, 4), 0.7);
        prop_assume!(delta > 0.0);
        let opts = ReduceOptions {
            threshold: percentile(kwise_volumes(&f, 3), 0.7),
            delta,
            seed,
            restarts: 16,
            ..ReduceOptions::default()
        };
        match reduce_d1_to_2d(&f, &opts) {
            Ok(out) => {
                for c in &out.copies {
                    prop_assert!(is_partite_copy(&out.h, &c.classes, opts.n_class));
                }
                for e in out.h_prime.edges() {
                    let bs: Vec<&ConvexBody> = e.iter().map(|&i| f.member(i)).collect();
                    prop_assert!(box_meet(&bs, None) >= delta - 1e-9);
                }
            }
            Err(HypergraphError::NoCopies { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn sparsified_pieces_have_no_common_pair(seed in any::<u64>(), m in 2usize..=4) {
        // first class: short boxes along a strip with some overlaps;
        // the other classes: long boxes spanning the strip
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rect = |x0: f64, y0: f64, x1: f64, y1: f64| ConvexBody::boxed(vec![x0, y0], vec![x1, y1]).unwrap();
        let span = 8.0 * m as f64;
        let first: Vec<ConvexBody> = (0..m)
            .map(|i| {
                let x = 8.0 * i as f64 + rng.random::<f64>() * 2.0 - 1.0;
                rect(x, 0.0, x + 6.0 + rng.random::<f64>() * 3.0, 1.0)
            })
            .collect();
        let long = |rng: &mut ChaCha8Rng| {
            (0..m)
                .map(|_| rect(-2.0 - rng.random::<f64>(), -rng.random::<f64>(), span + 2.0, 1.0 + rng.random::<f64>()))
                .collect::<Vec<_>>()
        };
        let (b, c) = (long(&mut rng), long(&mut rng));
        let t = RainbowTuple {
            families: vec![Family::new(2, first).unwrap(), Family::new(2, b).unwrap(), Family::new(2, c).unwrap()],
            m,
            alpha: 6.0,
            s: 2,
            epsilon: 1.0,
        };
        let out = match sparsify(&t, 1, 1e-9) {
            Ok(out) => out,
            Err(HypergraphError::SimplexCoverTooLarge { .. } | HypergraphError::NoMonochromaticGrid { .. }) => {
                return Err(TestCaseError::reject("cover or coloring precondition"));
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(out.no_s_wise);
        let pieces: Vec<Option<Vec<[f64; 2]>>> = out
            .star
            .members()
            .iter()
            .map(|p| vertices(p, 1e6).ok().filter(|v| v.len() >= 3).map(|_| polygon_vertices(p)))
            .collect();
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if let (Some(a), Some(b)) = (&pieces[i], &pieces[j]) {
                    let area = clipped_area(a, b);
                    prop_assert!(area <= 1e-7, "pieces {i} and {j} share area {area}");
                }
            }
        }
    }
}

#[test]
fn k4_and_its_complement() {
    let k4 = UniformHypergraph::complete(2, 4).unwrap();
    assert_eq!(count_partite_copies(&k4, 2).unwrap(), 3);
    let c4 =
        UniformHypergraph::new(2, 4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
    assert_eq!(count_partite_copies(&c4, 2).unwrap(), 1);
    assert_eq!(nested_loop_count(&c4, 2), 1);
}
