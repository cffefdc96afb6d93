use contractive_core::gallery::make_default;
use contractive_core::picard::{
    bound_p2_k, bound_p4_k, orbit_exact, orbit_inexact, run_stability_experiment,
    solve_fixed_point, BoundInputs, PicardError, StabilityExperiment,
};
use contractive_core::{DomainSet, MappingInstance, Modulus, Point, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scalar(v: f64) -> Point {
    Point::from_element(1, v)
}

#[test]
fn consecutive_steps_fall_below_epsilon_after_step_bound() {
    let entry = make_default("rakotch-decay").unwrap();
    let k = bound_p2_k(
        0.1,
        entry.map.modulus(),
        BoundInputs::new(1.0, 0.0).unwrap(),
    )
    .unwrap();
    assert_eq!(k, 221);
    let k = k as usize;
    for x0 in [0.0, 0.01, 0.25, 0.5, 0.75, 1.0] {
        let orbit = orbit_exact(&entry.map, &scalar(x0), k + 500).unwrap();
        let steps = orbit.step_distances(&entry.map);
        assert!(steps[k..].iter().all(|&s| s <= 0.1), "x0 = {x0}");
        // closed form of the step: x0^2 / ((1 + i x0)(1 + (i + 1) x0))
        for (i, s) in steps.iter().enumerate().step_by(37) {
            let i = i as f64;
            let expected = x0 * x0 / ((1.0 + i * x0) * (1.0 + (i + 1.0) * x0));
            assert!((s - expected).abs() <= 1e-15, "i = {i}, x0 = {x0}");
        }
    }
}

#[test]
fn orbits_merge_within_epsilon_by_merge_bound() {
    let entry = make_default("rakotch-decay").unwrap();
    let k = bound_p4_k(0.1, entry.map.modulus(), 1.0).unwrap();
    assert_eq!(k, 441);
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..100 {
        let (x0, y0) = (rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0));
        let a = orbit_exact(&entry.map, &scalar(x0), k as usize).unwrap();
        let b = orbit_exact(&entry.map, &scalar(y0), k as usize).unwrap();
        assert!(
            entry.map.distance(a.last(), b.last()) <= 0.1,
            "x0 = {x0}, y0 = {y0}"
        );
    }
}

#[test]
fn fixed_point_is_unique_across_seeds() {
    for (name, tol, lo, hi) in [
        ("affine-halfline", 1e-10, -1.0, 50.0),
        ("rational-damped", 1e-10, -2.0, 2.0),
        ("rakotch-decay", 1e-6, 0.0, 20.0),
    ] {
        let entry = make_default(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let sols: Vec<Point> = (0..20)
            .map(|_| {
                let x0 = scalar(rng.random_range(lo..=hi));
                solve_fixed_point(&entry.map, &x0, tol, 1_000_000)
                    .unwrap()
                    .point
            })
            .collect();
        for a in &sols {
            for b in &sols {
                assert!(entry.map.distance(a, b) <= 10.0 * tol, "{name}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn decay_orbit_follows_closed_form() {
    let entry = make_default("rakotch-decay").unwrap();
    let orbit = orbit_exact(&entry.map, &scalar(1.0), 1000).unwrap();
    for (i, p) in orbit.points.iter().enumerate() {
        assert!((p[0] - 1.0 / (i as f64 + 1.0)).abs() <= 1e-12);
    }
}

#[test]
fn nonself_exit_is_reported_with_the_orbit() {
    let space = Space::euclidean(1);
    let map = MappingInstance::new(
        "shift-left",
        space,
        DomainSet::half_line(0.0).unwrap(),
        Modulus::constant(0.5).unwrap(),
        |x: &Point| x.map(|v| v / 2.0 - 1.0),
    )
    .unwrap();
    match solve_fixed_point(&map, &scalar(3.0), 1e-10, 100) {
        Err(PicardError::NonselfExit(orbit)) => {
            assert_eq!(orbit.exited_domain_at, Some(2));
            assert_eq!(orbit.points, vec![scalar(3.0), scalar(0.5), scalar(-0.75)]);
        }
        other => panic!("expected a nonself exit, got {other:?}"),
    }
    let orbit = orbit_exact(&map, &scalar(3.0), 10).unwrap();
    assert_eq!(orbit.exited_domain_at, Some(2));
    assert_eq!(orbit.len(), 3);
}

#[test]
fn stability_trials_stay_within_epsilon() {
    let entry = make_default("rakotch-decay").unwrap();
    let exp = StabilityExperiment {
        radius: 1.0,
        epsilon: 0.1,
        trials: 100,
        steps: 2000,
        seed: 1,
        delta_override: None,
    };
    let report = run_stability_experiment(&entry.map, &Point::zeros(1), &exp).unwrap();
    assert_eq!(report.constants.k, 885);
    assert!((report.constants.delta - 2.976e-4).abs() < 1e-7);
    assert!(!report.constants_violated);
    assert_eq!(report.pass_count(), 100);
    for t in &report.trials {
        assert!(t.x0[0] >= 0.0 && t.x0[0] <= 1.0);
    }
}

#[test]
fn stability_experiment_is_reproducible() {
    let entry = make_default("rational-damped").unwrap();
    let exp = StabilityExperiment {
        radius: 1.5,
        epsilon: 0.05,
        trials: 10,
        steps: 500,
        seed: 9,
        delta_override: None,
    };
    let a = run_stability_experiment(&entry.map, &Point::zeros(1), &exp).unwrap();
    let b = run_stability_experiment(&entry.map, &Point::zeros(1), &exp).unwrap();
    assert_eq!(a, b);
    let c = run_stability_experiment(
        &entry.map,
        &Point::zeros(1),
        &StabilityExperiment { seed: 10, ..exp },
    )
    .unwrap();
    assert_ne!(a.trials, c.trials);
    assert!(a.all_pass() && c.all_pass());
}

#[test]
fn oversized_delta_is_flagged_not_asserted() {
    let entry = make_default("rakotch-decay").unwrap();
    let exp = StabilityExperiment {
        radius: 1.0,
        epsilon: 0.1,
        trials: 5,
        steps: 1000,
        seed: 3,
        delta_override: Some(0.05),
    };
    let report = run_stability_experiment(&entry.map, &Point::zeros(1), &exp).unwrap();
    assert!(report.constants_violated);
    assert_eq!(report.delta_used, 0.05);
}

#[test]
fn inexact_orbit_noise_is_seeded() {
    let entry = make_default("rakotch-decay").unwrap();
    let a = orbit_inexact(&entry.map, &scalar(0.5), 100, 1e-3, 1).unwrap();
    let b = orbit_inexact(&entry.map, &scalar(0.5), 100, 1e-3, 1).unwrap();
    let c = orbit_inexact(&entry.map, &scalar(0.5), 100, 1e-3, 2).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.points, c.points);
}
