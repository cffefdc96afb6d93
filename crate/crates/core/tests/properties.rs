mod common;

use contractive_core::gallery::{make_default, make_map, registry, Params};
use contractive_core::metric::verify_contractive;
use contractive_core::picard::{orbit_exact, orbit_inexact, stability_constants};
use contractive_core::{Modulus, Point, Space};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ROUNDOFF: f64 = 8.0 * f64::EPSILON;

fn point(dim: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(-100.0..100.0f64, dim).prop_map(Point::from_vec)
}

fn triple() -> impl Strategy<Value = (usize, Point, Point, Point)> {
    (1usize..6).prop_flat_map(|d| (Just(d), point(d), point(d), point(d)))
}

fn modulus() -> impl Strategy<Value = Modulus> {
    any::<u64>().prop_map(|s| common::random_modulus(&mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn metric_axioms((dim, x, y, z) in triple()) {
        for space in [Space::euclidean(dim), Space::max_norm(dim)] {
            let (dxy, dyz, dxz) = (space.distance(&x, &y), space.distance(&y, &z), space.distance(&x, &z));
            prop_assert_eq!(space.distance(&x, &x), 0.0);
            prop_assert!(dxy >= 0.0);
            prop_assert_eq!(dxy, space.distance(&y, &x));
            prop_assert!(dxz <= (dxy + dyz) * (1.0 + ROUNDOFF));
            if x != y {
                prop_assert!(dxy > 0.0);
            }
        }
    }

    #[test]
    fn modulus_is_non_increasing(m in modulus(), mut ts in prop::collection::vec(0.0..20.0f64, 2..40)) {
        ts.sort_by(f64::total_cmp);
        let values: Vec<f64> = ts.iter().map(|&t| m.eval(t).unwrap()).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0], "{} on {:?}: {:?}", m, ts, values);
        }
        prop_assert!(values.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn stability_constants_invariants(m in modulus(), radius in 0.01..100.0f64, epsilon in 0.001..10.0f64) {
        let c = stability_constants(radius, epsilon, &m).unwrap();
        prop_assert!(c.violations(&m).is_empty(), "{:?}", c.violations(&m));
        prop_assert!(c.delta > 0.0);
        prop_assert!(c.admits_delta(&m, c.delta));
        prop_assert!(c.k as f64 > c.k_threshold(&m));
        let (l0, l1, l2) = c.delta_limits(&m);
        prop_assert!(c.delta0 < l0 && c.delta1 < l1 && c.delta < l2.min(c.delta0).min(c.delta1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_orbit_steps_never_grow(x0 in 0.0..50.0f64, which in 0usize..3) {
        let name = ["affine-halfline", "rakotch-decay", "rational-damped"][which];
        let entry = make_default(name).unwrap();
        let x0 = Point::from_element(1, if name == "rational-damped" { x0 / 25.0 - 1.0 } else { x0 });
        let orbit = orbit_exact(&entry.map, &x0, 300).unwrap();
        let steps = orbit.step_distances(&entry.map);
        for w in steps.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 4.0 * f64::EPSILON), "{:?}", w);
        }
    }

    #[test]
    fn zero_perturbation_is_exact(x0 in 0.0..10.0f64, seed in any::<u64>()) {
        let entry = make_default("rakotch-decay").unwrap();
        let x0 = Point::from_element(1, x0);
        let a = orbit_exact(&entry.map, &x0, 200).unwrap();
        let b = orbit_inexact(&entry.map, &x0, 200, 0.0, seed).unwrap();
        prop_assert_eq!(a.points, b.points);
    }

    #[test]
    fn perturbations_respect_delta(x0 in prop::collection::vec(0.0..5.0f64, 3), delta in 1e-6..0.5f64, seed in any::<u64>()) {
        let mut params = Params::new();
        params.insert("dim".into(), vec![3.0]);
        let entry = make_map("rakotch-decay", &params).unwrap();
        let orbit = orbit_inexact(&entry.map, &Point::from_vec(x0), 200, delta, seed).unwrap();
        prop_assert!(orbit.exited_domain_at.is_none());
        prop_assert!(orbit.residuals.iter().all(|&r| r <= delta * (1.0 + 1e-12)));
        prop_assert!(orbit.points.iter().all(|p| entry.map.contains(p)));
    }

    #[test]
    fn parameterized_maps_meet_their_modulus(
        lower in -5.0..-1.5f64,
        theta in 0.2..6.0f64,
        halfwidth in 0.1..4.0f64,
        seed in any::<u64>(),
    ) {
        let cases: [(&str, &str, f64); 3] = [
            ("affine-halfline", "lower", lower),
            ("planar-rotation", "theta", theta),
            ("rational-damped", "halfwidth", halfwidth),
        ];
        for (name, key, value) in cases {
            let mut params = Params::new();
            params.insert(key.into(), vec![value]);
            if name == "planar-rotation" {
                params.insert("radius".into(), vec![1.0 / (2.0 * (theta / 2.0).sin()) + 1.0]);
            }
            let entry = make_map(name, &params).unwrap();
            let report = verify_contractive(&entry.map, &entry.sample_pairs(200, seed), 1e-12).unwrap();
            prop_assert!(report.pass(), "{} {}={}: worst excess {}", name, key, value, report.worst_excess());
        }
    }
}

#[test]
fn every_gallery_entry_meets_its_modulus_on_1000_pairs() {
    for spec in registry() {
        let entry = make_default(spec.name).unwrap();
        let report =
            verify_contractive(&entry.map, &entry.sample_pairs(1000, 2024), 1e-12).unwrap();
        assert_eq!(report.pairs.len(), 1000);
        assert!(
            report.pass(),
            "{}: {} failures",
            spec.name,
            report.failures()
        );
        assert!(
            entry.check_invariants().is_empty(),
            "{}: {:?}",
            spec.name,
            entry.check_invariants()
        );
    }
}

#[test]
fn multidimensional_decay_meets_its_modulus() {
    let mut params = Params::new();
    params.insert("dim".into(), vec![4.0]);
    let entry = make_map("rakotch-decay", &params).unwrap();
    let report = verify_contractive(&entry.map, &entry.sample_pairs(1000, 3), 1e-12).unwrap();
    assert!(report.pass(), "worst excess {}", report.worst_excess());
}
