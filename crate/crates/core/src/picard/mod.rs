//! Exact and perturbed Picard orbits for (possibly nonself) Rakotch maps, the
//! fixed-point solver, and the computable stability constants.

mod bounds;
mod orbit;
mod stability;

use thiserror::Error;

use crate::metric::MetricError;

pub use bounds::{
    bound_p2_k, bound_p3_eps, bound_p4_k, least_integer_above, stability_constants, BoundInputs,
    StabilityConstants, INTEGER_TIE_TOLERANCE,
};
pub use orbit::{orbit_exact, orbit_inexact, solve_fixed_point, FixedPointSolution, Orbit};
pub use stability::{
    run_stability_experiment, StabilityExperiment, StabilityReport, TrialRecord,
    FIXED_POINT_CERTIFICATE,
};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum PicardError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{0}")]
    Argument(String),
    #[error("modulus is not Rakotch: phi({t}) = {phi}")]
    NotRakotch { t: f64, phi: f64 },
    #[error("iterate {} left the domain", .0.exited_domain_at.unwrap_or(0))]
    NonselfExit(Box<Orbit>),
    #[error("no convergence after {iterations} iterations, last residual {residual:e}")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("claimed fixed point has residual {residual:e}")]
    NotFixedPoint { residual: f64 },
}
