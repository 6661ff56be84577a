mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use helly_lab::diameter::{
    diameter_after_removal, diameter_pq_transversal, gale_enclosing_simplex, qfh_diameter_select,
    DiameterThresholdConfig,
};
use helly_lab::generators::three_cluster;
use helly_lab::geometry::{diameter, vertices, ConvexBody, Family};

fn thin_boxes(seed: u64, n: usize) -> Family {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = (0..n)
        .map(|i| {
            let (x, y) = (rng.random::<f64>() * 0.5, rng.random::<f64>() * 0.5);
            let (long, thin) = (2.0 + rng.random::<f64>(), 0.6 + rng.random::<f64>() * 0.4);
            let (w, h) = if i % 2 == 0 {
                (long, thin)
            } else {
                (thin, long)
            };
            ConvexBody::boxed(
                vec![x - w / 2.0, y - h / 2.0],
                vec![x + w / 2.0, y + h / 2.0],
            )
            .unwrap()
        })
        .collect();
    Family::new(2, members).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn removal_bound_stays_below_the_diameter(seed in any::<u64>(), holes in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = draw_polygon(&mut rng, 1.0, 0.5, 3 + (seed % 8) as usize);
        let removed: Vec<ConvexBody> = (0..holes)
            .map(|_| ConvexBody::ball(vec![rng.random::<f64>(), rng.random::<f64>()], 0.2 * rng.random::<f64>() + 0.01).unwrap())
            .collect();
        let full = diameter(&c, 1e6).unwrap();
        let r = diameter_after_removal(&c, &removed, 4000, seed, 1e6).unwrap();
        prop_assert!(r.lower_bound <= full + 1e-9, "{} > {full}", r.lower_bound);
        if holes == 0 {
            prop_assert!((r.lower_bound - full).abs() <= 1e-9);
        }
    }

    #[test]
    fn gale_simplex_contains_the_body(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = draw_polygon(&mut rng, 3.0, 0.2, 3 + (seed % 10) as usize);
        let g = gale_enclosing_simplex(&c, 1e6).unwrap();
        for p in vertices(&c, 1e6).unwrap() {
            prop_assert!(g.simplex.contains_point(&p, 1e-9));
        }
    }

    #[test]
    fn diameter_popularity_bound(seed in any::<u64>(), n in 8usize..12) {
        let f = thin_boxes(seed, n);
        let cfg = DiameterThresholdConfig::default();
        let r = match qfh_diameter_select(&f, &cfg, 1e-9) {
            Ok(r) => r,
            Err(e) => return Err(TestCaseError::reject(e.to_string())),
        };
        prop_assert!(
            4 * r.popularity as u128 * r.total_tuples >= r.good_tuples as u128 * (n as u128 - 3)
        );
        // the selected boxes meet in a box whose diameter is its diagonal
        let (mut lo, mut hi) = (vec![f64::NEG_INFINITY; 2], vec![f64::INFINITY; 2]);
        for &i in &r.selected {
            let (a, b) = as_box(f.member(i));
            for k in 0..2 {
                lo[k] = lo[k].max(a[k]);
                hi[k] = hi[k].min(b[k]);
            }
        }
        let diag = (0..2).map(|k| (hi[k] - lo[k]).max(0.0).powi(2)).sum::<f64>().sqrt();
        prop_assert!(r.measured_volume > 0.0);
        prop_assert!((diag - r.measured_volume).abs() <= 1e-9, "{diag} vs {}", r.measured_volume);
    }

    #[test]
    fn segment_certificates_hold(seed in 0u64..100) {
        let f = three_cluster(seed, 3).unwrap();
        let cfg = DiameterThresholdConfig { threshold: 0.5, ..DiameterThresholdConfig::default() };
        let r = diameter_pq_transversal(&f, 4, 3.0, &cfg, 1e-9).unwrap();
        prop_assert!(r.verified);
        for (i, m) in f.members().iter().enumerate() {
            let held = r.certificate.segments.iter().any(|s| {
                let len = s.a.iter().zip(&s.b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
                // convexity: both endpoints inside puts the whole segment inside
                len >= 3.0 - 1e-9 && m.contains_point(&s.a, 1e-9) && m.contains_point(&s.b, 1e-9)
            });
            prop_assert!(held, "member {i}");
        }
    }
}
