use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metric::{MappingInstance, MetricError, Point};

use super::PicardError;

/// Rejection draws tried before falling back to projecting onto the domain.
const REJECTION_TRIES: usize = 32;

/// Finite Picard orbit `x_0, ..., x_n`, possibly inexact.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub points: Vec<Point>,
    /// `residuals[i] = d(x_{i+1}, T x_i)`.
    pub residuals: Vec<f64>,
    /// First index whose point lies outside the domain; the orbit stops there.
    pub exited_domain_at: Option<usize>,
    pub perturbation_bound: f64,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("orbit holds its seed")
    }

    /// `d(x_i, x_{i+1})` for consecutive points.
    pub fn step_distances(&self, map: &MappingInstance) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| map.distance(&w[0], &w[1]))
            .collect()
    }
}

fn checked_seed(map: &MappingInstance, x0: &Point) -> Result<(), PicardError> {
    map.space().check_dim(x0)?;
    if !map.contains(x0) {
        return Err(MetricError::OutsideDomain {
            point: x0.iter().copied().collect(),
        }
        .into());
    }
    Ok(())
}

/// Exact orbit of length `n`, truncated at the first iterate that leaves the domain.
pub fn orbit_exact(map: &MappingInstance, x0: &Point, n: usize) -> Result<Orbit, PicardError> {
    orbit_inexact(map, x0, n, 0.0, 0)
}

/// Orbit with `d(x_{i+1}, T x_i) <= delta`.
///
/// Each perturbation is uniform on the `delta`-ball around `T x_i` intersected
/// with the domain (rejection sampling, seeded by `noise_seed`). When rejection
/// keeps failing the perturbed point is projected onto the domain; the
/// projection stays within `delta` of `T x_i`. With `delta = 0` the result is
/// bit-identical to [`orbit_exact`].
pub fn orbit_inexact(
    map: &MappingInstance,
    x0: &Point,
    n: usize,
    delta: f64,
    noise_seed: u64,
) -> Result<Orbit, PicardError> {
    if delta.is_nan() || delta < 0.0 || delta.is_infinite() {
        return Err(PicardError::Argument(format!(
            "delta must be finite and nonnegative, got {delta}"
        )));
    }
    checked_seed(map, x0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
    let space = map.space();
    let domain = map.domain();

    let mut points = Vec::with_capacity(n + 1);
    let mut residuals = Vec::with_capacity(n);
    let mut exited_domain_at = None;
    points.push(x0.clone());

    for i in 0..n {
        let tx = map.apply(&points[i])?;
        let next = if delta == 0.0 {
            tx.clone()
        } else if map.contains(&tx) {
            let mut accepted = None;
            let mut last = tx.clone();
            for _ in 0..REJECTION_TRIES {
                last = space.sample_ball(&mut rng, &tx, delta);
                if map.contains(&last) {
                    accepted = Some(last.clone());
                    break;
                }
            }
            accepted.unwrap_or_else(|| {
                let projected = domain.project(space, &last);
                if space.distance(&projected, &tx) <= delta {
                    projected
                } else {
                    tx.clone()
                }
            })
        } else {
            // The exact image already left the domain; a perturbation may or may
            // not bring it back.
            space.sample_ball(&mut rng, &tx, delta)
        };
        residuals.push(space.distance(&next, &tx));
        let inside = map.contains(&next);
        points.push(next);
        if !inside {
            exited_domain_at = Some(i + 1);
            break;
        }
    }
    Ok(Orbit {
        points,
        residuals,
        exited_domain_at,
        perturbation_bound: delta,
    })
}

/// Result of [`solve_fixed_point`].
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSolution {
    pub point: Point,
    pub iterations: usize,
    pub residual: f64,
}

/// Picard iteration until `d(x_i, T x_i) <= tol`.
///
/// The modulus must be Rakotch. Fails with [`PicardError::NonselfExit`] (carrying
/// the orbit so far) when an iterate leaves the domain, and with
/// [`PicardError::NonConvergence`] after `max_iter` applications of `T`.
pub fn solve_fixed_point(
    map: &MappingInstance,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointSolution, PicardError> {
    if !(tol > 0.0) {
        return Err(PicardError::Argument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if !map.modulus().is_rakotch() {
        return Err(PicardError::NotRakotch {
            t: tol,
            phi: map.modulus().phi(tol),
        });
    }
    checked_seed(map, x0)?;

    let mut x = x0.clone();
    let mut points = vec![x.clone()];
    let mut residuals = Vec::new();
    let mut iterations = 0;
    loop {
        let tx = map.apply(&x)?;
        let residual = map.distance(&x, &tx);
        if residual <= tol {
            return Ok(FixedPointSolution {
                point: x,
                iterations,
                residual,
            });
        }
        if iterations == max_iter {
            return Err(PicardError::NonConvergence {
                iterations,
                residual,
            });
        }
        iterations += 1;
        residuals.push(0.0);
        points.push(tx.clone());
        if !map.contains(&tx) {
            let orbit = Orbit {
                exited_domain_at: Some(points.len() - 1),
                points,
                residuals,
                perturbation_bound: 0.0,
            };
            return Err(PicardError::NonselfExit(Box::new(orbit)));
        }
        x = tx;
    }
}
