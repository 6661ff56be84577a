//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use helly_lab::combinatorics::for_each_subset;
use helly_lab::generators::{random_boxes, random_polygon, scale_family};
use helly_lab::geometry::{vertices, BodyKind, ConvexBody, Family};
use helly_lab::hypergraph::UniformHypergraph;
pub fn shoelace(p: &[[f64; 2]]) -> f64 {
    let n = p.len();
    (0..n)
        .map(|i| p[i][0] * p[(i + 1) % n][1] - p[(i + 1) % n][0] * p[i][1])
        .sum::<f64>()
        .abs()
        / 2.0
}

/// Area of a convex polygon below the line `y = t`.
pub fn area_below(poly: &[[f64; 2]], t: f64) -> f64 {
    let n = poly.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let (pin, qin) = (p[1] <= t, q[1] <= t);
        if pin {
            out.push(p);
        }
        if pin != qin {
            let s = (t - p[1]) / (q[1] - p[1]);
            out.push([p[0] + s * (q[0] - p[0]), t]);
        }
    }
    if out.len() < 3 {
        0.0
    } else {
        shoelace(&out)
    }
}

pub fn draw_polygon(rng: &mut ChaCha8Rng, x_scale: f64, r_min: f64, k: usize) -> ConvexBody {
    let c = [rng.random::<f64>() * x_scale, rng.random::<f64>()];
    let r = r_min + rng.random::<f64>();
    random_polygon(rng, c, r, k).unwrap()
}

pub fn polygon_vertices(b: &ConvexBody) -> Vec<[f64; 2]> {
    let v = vertices(b, 1e6).unwrap();
    let c = v.iter().fold([0.0, 0.0], |a, p| {
        [a[0] + p[0] / v.len() as f64, a[1] + p[1] / v.len() as f64]
    });
    let mut pts: Vec<[f64; 2]> = v.iter().map(|p| [p[0], p[1]]).collect();
    pts.sort_by(|a, b| {
        (a[1] - c[1])
            .atan2(a[0] - c[0])
            .total_cmp(&(b[1] - c[1]).atan2(b[0] - c[0]))
    });
    pts
}

pub fn as_box(b: &ConvexBody) -> (Vec<f64>, Vec<f64>) {
    match b.kind() {
        BodyKind::Box { min, max } => (min.clone(), max.clone()),
        _ => panic!("not a box"),
    }
}

/// Volume of a box intersection, optionally capped by `x_last <= cap`.
pub fn box_meet(boxes: &[&ConvexBody], cap: Option<f64>) -> f64 {
    let d = boxes[0].dim();
    let mut lo = vec![f64::NEG_INFINITY; d];
    let mut hi = vec![f64::INFINITY; d];
    for b in boxes {
        let (a, z) = as_box(b);
        for k in 0..d {
            lo[k] = lo[k].max(a[k]);
            hi[k] = hi[k].min(z[k]);
        }
    }
    if let Some(t) = cap {
        hi[d - 1] = hi[d - 1].min(t);
    }
    (0..d).map(|k| (hi[k] - lo[k]).max(0.0)).product()
}

pub fn percentile(mut v: Vec<f64>, q: f64) -> f64 {
    v.sort_by(f64::total_cmp);
    v[((v.len() - 1) as f64 * q).floor() as usize]
}

pub fn kwise_volumes(f: &Family, k: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for_each_subset(f.len(), k, |s| {
        let bs: Vec<&ConvexBody> = s.iter().map(|&i| f.member(i)).collect();
        out.push(box_meet(&bs, None));
    });
    out
}

/// Random boxes scaled so that at least a `good` fraction of 4-tuples
/// have intersection area at least 1.
pub fn scaled_boxes(seed: u64, n: usize, good: f64) -> Family {
    let f = random_boxes(seed, 2, n).unwrap();
    let vols = kwise_volumes(&f, 4);
    let mut v = percentile(vols.clone(), 1.0 - good);
    if v <= 0.0 {
        v = vols
            .into_iter()
            .filter(|&x| x > 0.0)
            .fold(f64::INFINITY, f64::min);
    }
    scale_family(&f, (1.0 / v).sqrt() * (1.0 + 1e-6)).unwrap()
}

/// Unordered copies counted by looping over ordered tuples of disjoint
/// `m`-subsets and dividing by the class orderings.
pub fn nested_loop_count(g: &UniformHypergraph, m: usize) -> u64 {
    let n = g.n();
    let h = g.h();
    let classes: Vec<u32> = (0u32..1 << n)
        .filter(|c| c.count_ones() as usize == m)
        .collect();
    let members = |c: u32| (0..n).filter(move |&v| c >> v & 1 == 1);
    let mut ordered = 0u64;
    let mut stack: Vec<u32> = Vec::new();
    fn rec(
        g: &UniformHypergraph,
        h: usize,
        classes: &[u32],
        stack: &mut Vec<u32>,
        used: u32,
        members: &dyn Fn(u32) -> Vec<usize>,
        ordered: &mut u64,
    ) {
        if stack.len() == h {
            let mut ok = true;
            let mut pick: Vec<Vec<usize>> = vec![vec![]];
            for &c in stack.iter() {
                pick = pick
                    .into_iter()
                    .flat_map(|p| {
                        members(c)
                            .into_iter()
                            .map(move |v| [p.clone(), vec![v]].concat())
                    })
                    .collect();
            }
            for e in pick {
                ok &= g.contains(&e);
            }
            *ordered += ok as u64;
            return;
        }
        for &c in classes {
            if c & used == 0 {
                stack.push(c);
                rec(g, h, classes, stack, used | c, members, ordered);
                stack.pop();
            }
        }
    }
    let mem = |c: u32| members(c).collect::<Vec<usize>>();
    rec(g, h, &classes, &mut stack, 0, &mem, &mut ordered);
    let fact: u64 = (1..=h as u64).product();
    ordered / fact
}

/// Intersection of two counterclockwise convex polygons by clipping `a`
/// against every edge of `b`.
pub fn convex_clip(a: &[[f64; 2]], b: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut out = a.to_vec();
    for i in 0..b.len() {
        let (p, q) = (b[i], b[(i + 1) % b.len()]);
        let side = |x: [f64; 2]| (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0]);
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let (u, v) = (input[j], input[(j + 1) % input.len()]);
            let (su, sv) = (side(u), side(v));
            if su >= 0.0 {
                out.push(u);
            }
            if (su >= 0.0) != (sv >= 0.0) {
                let s = su / (su - sv);
                out.push([u[0] + s * (v[0] - u[0]), u[1] + s * (v[1] - u[1])]);
            }
        }
        if out.is_empty() {
            break;
        }
    }
    out
}

pub fn clipped_area(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let c = convex_clip(a, b);
    if c.len() < 3 {
        0.0
    } else {
        shoelace(&c)
    }
}
