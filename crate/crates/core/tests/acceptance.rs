//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! Reference values are recomputed here by code independent of the
//! library paths under test wherever practical.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use helly_lab::combinatorics::for_each_subset;
use helly_lab::diameter::{
    diameter_after_removal, diameter_pq_transversal, gale_enclosing_simplex,
    DiameterThresholdConfig,
};
use helly_lab::generators::{
    cube_counterexample, generic_lines, random_boxes, thickened_hyperplanes, three_cluster,
};
use helly_lab::geometry::{
    build_arrangement, ellipsoid_gauge, intersect, max_inscribed_ellipsoid, region_count_formula,
    vertices, volume, BodyKind, ConvexBody, Family, Halfspace, VolumeMode,
};
use helly_lab::hypergraph::{
    count_partite_copies, good_hypergraph, reduce_d1_to_2d, reduce_with_hypergraph, ReduceOptions,
    UniformHypergraph,
};
use helly_lab::select::{
    brute_force_best_subfamily, covering_halfspace, enumerate_good_tuples_with, qfh2d_select,
    select_from_table, Evaluator, Measure, SelectOptions,
};
use helly_lab::transversal::{
    containment_matrix, frac_matching_matrix, frac_transversal_matrix, generate_witnesses,
    min_cover_exhaustive, multiset_expand, pq_hypothesis_check, pq_transversal, PqOptions,
    WitnessKind, WitnessSet, DEFAULT_MAX_DEN,
};

mod common;
use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------- criteria ----------

fn c1_covering() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 100 {
        let k = draw_polygon(&mut rng, 1.0, 0.8, 9);
        let poly = polygon_vertices(&k);
        if shoelace(&poly) < 1.0 {
            continue;
        }
        count += 1;
        let c = covering_halfspace(&k, 1e-12).map_err(|e| e.to_string())?;
        let at = area_below(&poly, c.t);
        let before = area_below(&poly, c.t - 1e-5);
        worst = worst.max((at - 1.0).abs());
        ensure((at - 1.0).abs() <= 1e-6, || {
            format!("polygon {count}: area {at} at t*")
        })?;
        ensure(before < 1.0, || {
            format!("polygon {count}: area {before} at t* - 1e-5")
        })?;
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(5), || format!("took {el:?}"))?;
    Ok(format!(
        "100 polygons, max |area - 1| = {worst:.1e}, {el:.2?}"
    ))
}

struct PigeonRun {
    n: usize,
    popularity: usize,
    good: usize,
    total: u128,
    claims_ok: bool,
    min_claim_volume: f64,
}

fn pigeonhole_runs() -> Result<Vec<PigeonRun>, String> {
    let mut runs = Vec::new();
    for seed in 0..50u64 {
        let f = scaled_boxes(1000 + seed, 40, 0.2);
        let ev = Evaluator::new(&f, Measure::Volume).unwrap();
        let opts = SelectOptions::default();
        let table = enumerate_good_tuples_with(&ev, 1.0, opts.tol).map_err(|e| e.to_string())?;
        let (report, claims) =
            select_from_table(&ev, &table, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        let mut min_claim = f64::INFINITY;
        for c in &claims {
            let k = f.member(c.k);
            let j0: Vec<&ConvexBody> = report.j0.iter().map(|&i| f.member(i)).collect();
            // {H0} ∪ J0, {K} ∪ J0, and {H0, K} ∪ J0 minus one
            min_claim = min_claim.min(box_meet(&j0, Some(report.t0)));
            let mut with_k = j0.clone();
            with_k.push(k);
            min_claim = min_claim.min(box_meet(&with_k, None));
            for drop in 0..j0.len() {
                let mut s: Vec<&ConvexBody> = j0
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, b)| *b)
                    .collect();
                s.push(k);
                min_claim = min_claim.min(box_meet(&s, Some(report.t0)));
            }
        }
        runs.push(PigeonRun {
            n: f.len(),
            popularity: report.popularity,
            good: table.tuples.len(),
            total: table.total,
            claims_ok: claims.iter().all(|c| c.holds()),
            min_claim_volume: min_claim,
        });
    }
    Ok(runs)
}

fn c2_pigeonhole(runs: &Result<Vec<PigeonRun>, String>) -> Outcome {
    let runs = runs.as_ref().map_err(Clone::clone)?;
    let mut min_alpha = 1.0f64;
    for (i, r) in runs.iter().enumerate() {
        let alpha = r.good as f64 / r.total as f64;
        min_alpha = min_alpha.min(alpha);
        ensure(5 * r.good as u128 >= r.total, || {
            format!("run {i}: alpha {alpha} below 0.2")
        })?;
        // popularity >= alpha (n-3)/4  <=>  4 pop total >= good (n-3)
        ensure(
            4 * r.popularity as u128 * r.total >= r.good as u128 * (r.n as u128 - 3),
            || {
                format!(
                    "run {i}: popularity {} below {}",
                    r.popularity,
                    alpha * (r.n as f64 - 3.0) / 4.0
                )
            },
        )?;
    }
    Ok(format!("50 runs, min alpha {min_alpha:.3}"))
}

fn c3_claims(runs: &Result<Vec<PigeonRun>, String>) -> Outcome {
    let runs = runs.as_ref().map_err(Clone::clone)?;
    let mut worst = f64::INFINITY;
    for (i, r) in runs.iter().enumerate() {
        ensure(r.claims_ok, || format!("run {i}: a claim failed"))?;
        ensure(r.min_claim_volume >= 1.0 - 1e-6, || {
            format!("run {i}: subset volume {}", r.min_claim_volume)
        })?;
        worst = worst.min(r.min_claim_volume);
    }
    Ok(format!("50 runs, smallest claimed volume {worst:.6}"))
}

fn c4_sharpness() -> Outcome {
    for d in [2, 3] {
        let f = cube_counterexample(d, 0.25).map_err(|e| e.to_string())?;
        let mut all_inf = true;
        for_each_subset(2 * d, 2 * d - 1, |s| {
            let body =
                intersect(&s.iter().map(|&i| f.member(i).clone()).collect::<Vec<_>>()).unwrap();
            all_inf &= volume(&body, VolumeMode::Exact, 1e6).unwrap().is_infinite();
        });
        ensure(all_inf, || format!("d={d}: a (2d-1)-subset is bounded"))?;
        let full = volume(&intersect(f.members()).unwrap(), VolumeMode::Exact, 1e6)
            .unwrap()
            .size();
        ensure((full - 0.25).abs() <= 1e-9, || {
            format!("d={d}: full volume {full}")
        })?;
    }
    let f = thickened_hyperplanes(7, 2, 10, 0.01, 0.015).map_err(|e| e.to_string())?;
    let ev = Evaluator::new(&f, Measure::Diameter).unwrap();
    let h = good_hypergraph(&ev, 3, 0.5, 1e-9).map_err(|e| e.to_string())?;
    let density = h.density();
    ensure(density >= 0.9, || format!("H density {density}"))?;
    let opts = ReduceOptions {
        delta: 0.5,
        ..ReduceOptions::default()
    };
    let out = reduce_with_hypergraph(&f, &h, &opts).map_err(|e| e.to_string())?;
    ensure(out.h_prime.edge_count() == 0, || {
        format!("H' has {} edges", out.h_prime.edge_count())
    })?;
    let vol = Evaluator::new(&f, Measure::Volume).unwrap();
    let mut max4 = 0.0f64;
    for_each_subset(f.len(), 4, |s| max4 = max4.max(vol.of(s)));
    ensure(max4 < 0.5, || format!("a 4-subset has area {max4}"))?;
    Ok(format!(
        "cube counterexample d=2,3 ok; thick lines: H density {density:.3}, {} copies, H' empty, max 4-wise area {max4:.2e}",
        out.copies.len()
    ))
}

fn c5_oracle() -> Outcome {
    let start = Instant::now();
    let mut done = 0;
    for seed in 0..30u64 {
        let f = scaled_boxes(5000 + seed, 10, 0.3);
        let r = qfh2d_select(&f, 1.0, 1e-9).map_err(|e| format!("seed {seed}: {e}"))?;
        let best =
            brute_force_best_subfamily(&f, r.measured_volume, 1e-9).map_err(|e| e.to_string())?;
        ensure(r.selected.len() <= best.len(), || {
            format!(
                "seed {seed}: selected {} > brute force {}",
                r.selected.len(),
                best.len()
            )
        })?;
        let bs: Vec<&ConvexBody> = best.iter().map(|&i| f.member(i)).collect();
        let v = box_meet(&bs, None);
        ensure(v >= r.measured_volume - 1e-9, || {
            format!("seed {seed}: brute force subfamily has {v}")
        })?;
        done += 1;
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(60), || format!("took {el:?}"))?;
    Ok(format!("{done} instances, {el:.2?}"))
}

fn c6_arrangement() -> Outcome {
    for n in 1..=8usize {
        let (lines, bbox) = generic_lines(600 + n as u64, n).map_err(|e| e.to_string())?;
        let a = build_arrangement(&lines, &bbox).map_err(|e| e.to_string())?;
        let want = region_count_formula(n as u64, 2);
        ensure(a.regions.len() as u128 == want, || {
            format!("n={n}: {} regions, formula {want}", a.regions.len())
        })?;
    }
    let parallel = vec![
        Halfspace::new(vec![0.0, 1.0], 0.0).unwrap(),
        Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
    ];
    let a = build_arrangement(&parallel, &ConvexBody::cube(2, -5.0, 10.0))
        .map_err(|e| e.to_string())?;
    ensure(a.regions.len() == 3, || {
        format!("parallel: {} regions", a.regions.len())
    })?;
    Ok("n = 1..8 match the formula; 2 parallel lines give 3".into())
}

/// `k` disks around a circle where only neighbours overlap, with witness
/// balls at the neighbour midpoints and the centers. For odd `k` the
/// fractional optimum is `k / 2`.
fn disk_ring(k: usize, phase: f64, r: f64) -> (Family, Vec<ConvexBody>) {
    let rho = 3.0 * k as f64 / 5.0;
    let at = |t: f64| vec![rho * t.cos(), rho * t.sin()];
    let step = std::f64::consts::TAU / k as f64;
    let members = (0..k)
        .map(|i| ConvexBody::ball(at(phase + step * i as f64), 2.4).unwrap())
        .collect();
    let mut ws: Vec<ConvexBody> = (0..k)
        .map(|i| {
            let (p, q) = (
                at(phase + step * i as f64),
                at(phase + step * (i + 1) as f64),
            );
            ConvexBody::ball(vec![0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])], r).unwrap()
        })
        .collect();
    ws.extend((0..k).map(|i| ConvexBody::ball(at(phase + step * i as f64), r).unwrap()));
    (Family::new(2, members).unwrap(), ws)
}

fn c7_duality() -> Outcome {
    let mut worst_gap = 0.0f64;
    let mut worst_ms = 0.0f64;
    let mut fractional = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(700 + seed);
        let v = 0.2;
        let r = (v / std::f64::consts::PI).sqrt();
        let (f, ws, expect) = if seed >= 15 {
            let k = [5, 7, 9][seed as usize % 3];
            let (f, ws) = disk_ring(k, rng.random::<f64>(), r);
            (f, ws, Some(k as f64 / 2.0))
        } else {
            let n = rng.random_range(4..=10);
            // spread out so that triple overlaps are partial
            let boxes: Vec<ConvexBody> = (0..n)
                .map(|_| {
                    let lo = [rng.random::<f64>() * 3.0, rng.random::<f64>() * 3.0];
                    let side = [
                        1.0 + rng.random::<f64>() * 1.5,
                        1.0 + rng.random::<f64>() * 1.5,
                    ];
                    ConvexBody::boxed(lo.to_vec(), vec![lo[0] + side[0], lo[1] + side[1]]).unwrap()
                })
                .collect();
            let f = Family::new(2, boxes).unwrap();
            let gen =
                generate_witnesses(&f, v, WitnessKind::Ball, 1e-9).map_err(|e| e.to_string())?;
            let mut ws: Vec<ConvexBody> = Vec::new();
            // balls centered in pairwise overlaps
            for_each_subset(n, 2, |s| {
                let (a, b) = (as_box(f.member(s[0])), as_box(f.member(s[1])));
                let lo: Vec<f64> = (0..2).map(|k| a.0[k].max(b.0[k])).collect();
                let hi: Vec<f64> = (0..2).map(|k| a.1[k].min(b.1[k])).collect();
                if (0..2).all(|k| hi[k] - lo[k] >= 2.0 * r) && ws.len() < 20 {
                    ws.push(
                        ConvexBody::ball(vec![0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])], r)
                            .unwrap(),
                    );
                }
            });
            ws.extend(gen.witnesses.into_iter().take(40 - n - ws.len()));
            for b in f.members() {
                let (lo, hi) = as_box(b);
                let c: Vec<f64> = lo
                    .iter()
                    .zip(&hi)
                    .map(|(a, z)| 0.5 * (a + z) + (rng.random::<f64>() - 0.5) * 0.1)
                    .collect();
                ws.push(ConvexBody::ball(c, r).unwrap());
            }
            (f, ws, None)
        };
        let n = f.len();
        let w = WitnessSet::new(v, ws, 1e-9).map_err(|e| e.to_string())?;
        let m = containment_matrix(&f, &w, 1e-9);
        let tau = frac_transversal_matrix(&m, w.len()).map_err(|e| e.to_string())?;
        let nu = frac_matching_matrix(&m, w.len()).map_err(|e| e.to_string())?;
        let gap = (tau.objective - nu.objective).abs();
        worst_gap = worst_gap.max(gap);
        fractional += (tau.objective.fract().abs() > 1e-6) as usize;
        if let Some(t) = expect {
            ensure((tau.objective - t).abs() <= 1e-6, || {
                format!("seed {seed}: ring tau {} != {t}", tau.objective)
            })?;
        }
        ensure(gap <= 1e-6, || {
            format!("seed {seed}: tau {} nu {}", tau.objective, nu.objective)
        })?;
        let e = multiset_expand(&f, &nu, DEFAULT_MAX_DEN).map_err(|e| e.to_string())?;
        let ms = (e.total as f64 / e.denominator as f64 - nu.objective).abs();
        worst_ms = worst_ms.max(ms);
        ensure(ms <= 2.0 / DEFAULT_MAX_DEN as f64, || {
            format!("seed {seed}: N/D off by {ms}")
        })?;
        // recount from the multiplicities directly
        for j in 0..w.len() {
            let load: u64 = (0..n)
                .filter(|&i| m[i][j])
                .map(|i| e.multiplicities[i])
                .sum();
            ensure(load <= e.denominator, || {
                format!("seed {seed}: witness {j} in {load} > D copies")
            })?;
        }
    }
    Ok(format!(
        "20 instances ({fractional} with fractional tau), max |tau - nu| {worst_gap:.1e}, max |N/D - nu| {worst_ms:.1e}"
    ))
}

fn c8_pq() -> Outcome {
    let f = three_cluster(8, 3).map_err(|e| e.to_string())?;
    let check = pq_hypothesis_check(&f, 4, 0.3, 1e-9).map_err(|e| e.to_string())?;
    ensure(check.holds, || {
        format!("hypothesis fails on {:?}", check.violation)
    })?;
    ensure(check.p_tilde == 7 && check.alpha_den == 210, || {
        format!("p~ = {}, alpha = 1/{}", check.p_tilde, check.alpha_den)
    })?;
    let opts = PqOptions {
        threshold: 0.3,
        ..PqOptions::default()
    };
    let r = pq_transversal(&f, 4, 2.0, &opts).map_err(|e| e.to_string())?;
    // direct containment: witness disks inside polygon members
    for (i, c) in f.members().iter().enumerate() {
        let covered = r.certificate.bodies.iter().any(|b| match b.kind() {
            BodyKind::Ball { center, radius } => {
                let poly = polygon_vertices(c);
                (0..poly.len()).all(|k| {
                    let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
                    let (nx, ny) = (q[1] - p[1], p[0] - q[0]);
                    let l = (nx * nx + ny * ny).sqrt();
                    (nx * (center[0] - p[0]) + ny * (center[1] - p[1])) / l + radius <= 1e-9
                })
            }
            _ => false,
        });
        ensure(covered, || format!("member {i} holds no certificate disk"))?;
    }
    let w = generate_witnesses(&f, 2.0, WitnessKind::Ball, 1e-9).map_err(|e| e.to_string())?;
    let min = min_cover_exhaustive(&containment_matrix(&f, &w, 1e-9), 6)
        .map_err(|e| e.to_string())?
        .ok_or("no cover of size <= 6")?;
    ensure(r.certificate.size == 3 && min.len() == 3, || {
        format!(
            "certificate {} vs exhaustive minimum {}",
            r.certificate.size,
            min.len()
        )
    })?;
    Ok(format!(
        "p~ = 7, alpha = 1/210, {} witnesses, tau {:.3}, certificate 3 = minimum",
        r.witnesses, r.tau
    ))
}

fn c9_counting() -> Outcome {
    let k4 = UniformHypergraph::complete(2, 4).unwrap();
    let c = count_partite_copies(&k4, 2).map_err(|e| e.to_string())?;
    ensure(c == 3, || format!("K4 gives {c}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    for i in 0..200 {
        let h = rng.random_range(1..=3);
        let m = rng.random_range(1..=2);
        let n = rng.random_range(h * m..=12);
        let p: f64 = 0.3 + 0.6 * rng.random::<f64>();
        let mut edges = Vec::new();
        for_each_subset(n, h, |s| {
            if rng.random::<f64>() < p {
                edges.push(s.to_vec());
            }
        });
        let g = UniformHypergraph::new(h, n, edges).unwrap();
        let a = count_partite_copies(&g, m).map_err(|e| e.to_string())?;
        let b = nested_loop_count(&g, m);
        ensure(a == b, || {
            format!("instance {i} (n={n}, h={h}, m={m}): {a} vs {b}")
        })?;
    }
    Ok("K4 gives 3; 200 random hypergraphs agree".into())
}

fn c10_reduction() -> Outcome {
    let f = random_boxes(1010, 2, 18).map_err(|e| e.to_string())?;
    let delta = percentile(kwise_volumes(&f, 4), 0.75);
    let threshold = percentile(kwise_volumes(&f, 3), 0.75);
    let opts = ReduceOptions {
        threshold,
        n_class: 2,
        delta,
        seed: 10,
        ..ReduceOptions::default()
    };
    let out = reduce_d1_to_2d(&f, &opts).map_err(|e| e.to_string())?;
    ensure(out.h_prime.edge_count() > 0, || "H' is empty".into())?;
    for e in out.h_prime.edges() {
        let bs: Vec<&ConvexBody> = e.iter().map(|&i| f.member(i)).collect();
        let v = box_meet(&bs, None);
        ensure(v >= delta - 1e-9, || {
            format!("edge {e:?} has area {v} < {delta}")
        })?;
    }
    let r = qfh2d_select(&f, delta, 1e-9).map_err(|e| e.to_string())?;
    ensure(r.claim_verified && r.measured_volume >= 0.0, || {
        "selection not verified".into()
    })?;
    Ok(format!(
        "delta {delta:.4}, {} copies, {} edges of H' verified, selection of {}",
        out.copies.len(),
        out.h_prime.edge_count(),
        r.selected.len()
    ))
}

fn c11_diameter() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1100);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let k = draw_polygon(&mut rng, 4.0, 0.5, 7);
        let g = gale_enclosing_simplex(&k, 1e6).map_err(|e| e.to_string())?;
        worst = worst.max(g.ratio);
        for p in vertices(&k, 1e6).unwrap() {
            ensure(g.simplex.contains_point(&p, 1e-9), || {
                format!("polygon {i}: vertex {p:?} outside")
            })?;
        }
    }
    let c = ConvexBody::boxed(vec![0.0, 0.0], vec![1.0, 0.01]).unwrap();
    let hole = ConvexBody::ball(vec![0.5, 0.005], 0.01).unwrap();
    let rem = diameter_after_removal(&c, &[hole], 20_000, 11, 1e6).map_err(|e| e.to_string())?;
    ensure(rem.lower_bound >= 0.49, || {
        format!("removal bound {}", rem.lower_bound)
    })?;
    ensure(rem.lower_bound <= rem.full_diameter + 1e-12, || {
        "removal bound above the diameter".into()
    })?;
    let f = three_cluster(11, 3).map_err(|e| e.to_string())?;
    let cfg = DiameterThresholdConfig {
        threshold: 0.5,
        ..DiameterThresholdConfig::default()
    };
    let r = diameter_pq_transversal(&f, 4, 3.0, &cfg, 1e-9).map_err(|e| e.to_string())?;
    for (i, m) in f.members().iter().enumerate() {
        let ok = r.certificate.segments.iter().any(|s| {
            let mid: Vec<f64> = s.a.iter().zip(&s.b).map(|(p, q)| 0.5 * (p + q)).collect();
            [&s.a, &s.b, &mid].iter().all(|x| m.contains_point(x, 1e-9))
        });
        ensure(ok, || format!("member {i} holds no certificate segment"))?;
    }
    ensure(r.certificate.size >= 3, || {
        format!("certificate of size {}", r.certificate.size)
    })?;
    Ok(format!(
        "20 simplices contain their polygons (max ratio {worst:.2}); removal bound {:.3}; segment certificate of size {}",
        rem.lower_bound, r.certificate.size
    ))
}

fn c12_john() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1200);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let k = draw_polygon(&mut rng, 1.0, 0.3, 3 + i % 8);
        let e = max_inscribed_ellipsoid(&k, 1e-9).map_err(|e| e.to_string())?;
        let BodyKind::Ellipsoid { center, shape } = e.kind() else {
            return Err("not an ellipsoid".into());
        };
        for p in vertices(&k, 1e6).unwrap() {
            let g = ellipsoid_gauge(center, shape, &p);
            worst = worst.max(g);
            ensure(g <= 2.0 * (1.0 + 1e-6), || {
                format!("polygon {i}: vertex gauge {g}")
            })?;
        }
    }
    Ok(format!(
        "50 polygons, largest vertex gauge {worst:.6} (bound 2)"
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let runs = pigeonhole_runs();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("covering halfspace", Box::new(c1_covering)),
        ("pigeonhole bound", Box::new(|| c2_pigeonhole(&runs))),
        ("claim verification", Box::new(|| c3_claims(&runs))),
        ("sharpness constructions", Box::new(c4_sharpness)),
        ("oracle dominance", Box::new(c5_oracle)),
        ("arrangement formula", Box::new(c6_arrangement)),
        ("LP duality and rounding", Box::new(c7_duality)),
        ("(p, d+1) pipeline", Box::new(c8_pq)),
        ("partite counting", Box::new(c9_counting)),
        ("reduction soundness", Box::new(c10_reduction)),
        ("diameter suite", Box::new(c11_diameter)),
        ("John containment", Box::new(c12_john)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{:.2?}]",
                i + 1,
                t.elapsed()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name}: {why} [{:.2?}]",
                    i + 1,
                    t.elapsed()
                );
            }
        }
    }
    println!(
        "acceptance: {} of {} passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
