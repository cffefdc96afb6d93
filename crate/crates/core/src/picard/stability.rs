use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::{MappingInstance, Point};

use super::bounds::{stability_constants, StabilityConstants};
use super::orbit::orbit_inexact;
use super::PicardError;

/// Largest `d(xbar, T xbar)` accepted for a claimed fixed point.
pub const FIXED_POINT_CERTIFICATE: f64 = 1e-10;

/// Parameters of a seeded stability experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityExperiment {
    /// Seed radius `M` around the fixed point.
    pub radius: f64,
    pub epsilon: f64,
    pub trials: usize,
    /// Orbit length `n`; must be at least the computed `k`.
    pub steps: usize,
    pub seed: u64,
    /// Use this perturbation size instead of the computed one.
    pub delta_override: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub x0: Point,
    pub k: u64,
    pub delta: f64,
    /// `max d(x_i, xbar)` over `i in [k, n]` (infinite when the orbit left the domain).
    pub worst_distance: f64,
    pub exited_domain_at: Option<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub map: String,
    pub xbar: Point,
    pub constants: StabilityConstants,
    pub delta_used: f64,
    pub steps: usize,
    pub seed: u64,
    /// The perturbation size exceeds the admissible limits; the pass predicate is
    /// then reported but carries no guarantee.
    pub constants_violated: bool,
    pub trials: Vec<TrialRecord>,
}

impl StabilityReport {
    pub fn pass_count(&self) -> usize {
        self.trials.iter().filter(|t| t.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.pass_count() == self.trials.len()
    }

    /// `min (epsilon - worst_distance)` over all trials.
    pub fn worst_margin(&self) -> f64 {
        self.trials
            .iter()
            .map(|t| self.constants.epsilon - t.worst_distance)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Draw seeds within `radius` of `xbar`, run `delta`-inexact orbits and check
/// that every iterate from `k` to `n` is within `epsilon` of `xbar`.
pub fn run_stability_experiment(
    map: &MappingInstance,
    xbar: &Point,
    exp: &StabilityExperiment,
) -> Result<StabilityReport, PicardError> {
    if exp.trials == 0 {
        return Err(PicardError::Argument("trials must be at least 1".into()));
    }
    let fp_residual = map.distance(xbar, &map.apply(xbar)?);
    if !(fp_residual <= FIXED_POINT_CERTIFICATE) {
        return Err(PicardError::NotFixedPoint {
            residual: fp_residual,
        });
    }
    let constants = stability_constants(exp.radius, exp.epsilon, map.modulus())?;
    if (exp.steps as u64) < constants.k {
        return Err(PicardError::Argument(format!(
            "orbit length {} is shorter than the burn-in k = {}",
            exp.steps, constants.k
        )));
    }
    let delta_used = exp.delta_override.unwrap_or(constants.delta);
    let constants_violated = !constants.admits_delta(map.modulus(), delta_used);

    let mut rng = ChaCha8Rng::seed_from_u64(exp.seed);
    let k = constants.k as usize;
    let mut trials = Vec::with_capacity(exp.trials);
    for trial in 0..exp.trials {
        let x0 = draw_seed(map, &mut rng, xbar, exp.radius);
        let noise_seed: u64 = rng.random();
        let orbit = orbit_inexact(map, &x0, exp.steps, delta_used, noise_seed)?;
        let worst_distance = if orbit.exited_domain_at.is_some() {
            f64::INFINITY
        } else {
            orbit.points[k..]
                .iter()
                .map(|p| map.distance(p, xbar))
                .fold(0.0, f64::max)
        };
        trials.push(TrialRecord {
            trial,
            x0,
            k: constants.k,
            delta: delta_used,
            worst_distance,
            exited_domain_at: orbit.exited_domain_at,
            pass: worst_distance <= exp.epsilon,
        });
    }
    Ok(StabilityReport {
        map: map.name().to_string(),
        xbar: xbar.clone(),
        constants,
        delta_used,
        steps: exp.steps,
        seed: exp.seed,
        constants_violated,
        trials,
    })
}

/// Uniform draw from `B[xbar, radius]` intersected with the domain.
fn draw_seed<R: Rng>(map: &MappingInstance, rng: &mut R, xbar: &Point, radius: f64) -> Point {
    let space = map.space();
    for _ in 0..1024 {
        let p = space.sample_ball(rng, xbar, radius);
        if map.contains(&p) {
            return p;
        }
    }
    xbar.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{DomainSet, Modulus, Space};

    fn decay() -> MappingInstance {
        MappingInstance::new(
            "decay",
            Space::euclidean(1),
            DomainSet::half_line(0.0).unwrap(),
            Modulus::rational_decay(),
            |x| x.map(|v| v / (1.0 + v)),
        )
        .unwrap()
    }

    fn experiment() -> StabilityExperiment {
        StabilityExperiment {
            radius: 1.0,
            epsilon: 0.1,
            trials: 100,
            steps: 1000,
            seed: 1,
            delta_override: None,
        }
    }

    #[test]
    fn decay_all_trials_pass() {
        let r = run_stability_experiment(&decay(), &Point::zeros(1), &experiment()).unwrap();
        assert_eq!(r.pass_count(), 100);
        assert!(!r.constants_violated);
        assert_eq!(r.constants.k, 885);
        assert!(r.worst_margin() > 0.0);
        assert!(r.trials.iter().all(|t| t.x0[0] >= 0.0 && t.x0[0] <= 1.0));
    }

    #[test]
    fn zero_delta_passes() {
        let exp = StabilityExperiment {
            delta_override: Some(0.0),
            ..experiment()
        };
        let r = run_stability_experiment(&decay(), &Point::zeros(1), &exp).unwrap();
        assert!(r.all_pass());
        assert!(!r.constants_violated);
    }

    #[test]
    fn oversized_delta_is_flagged() {
        let exp = StabilityExperiment {
            delta_override: Some(1.0),
            trials: 5,
            ..experiment()
        };
        let r = run_stability_experiment(&decay(), &Point::zeros(1), &exp).unwrap();
        assert!(r.constants_violated);
    }

    #[test]
    fn rejects_non_fixed_point() {
        let err = run_stability_experiment(&decay(), &Point::from_element(1, 0.5), &experiment())
            .unwrap_err();
        assert!(matches!(err, PicardError::NotFixedPoint { .. }));
    }

    #[test]
    fn rejects_short_orbits() {
        let exp = StabilityExperiment {
            steps: 100,
            ..experiment()
        };
        assert!(run_stability_experiment(&decay(), &Point::zeros(1), &exp).is_err());
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let exp = StabilityExperiment {
            trials: 5,
            ..experiment()
        };
        let a = run_stability_experiment(&decay(), &Point::zeros(1), &exp).unwrap();
        let b = run_stability_experiment(&decay(), &Point::zeros(1), &exp).unwrap();
        assert_eq!(a, b);
    }
}
