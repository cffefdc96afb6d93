//! Homotopy continuation of the fixed points `x_t` of `tT` for nonexpansive
//! maps satisfying the Leray-Schauder boundary condition, and extraction of the
//! `t -> 1` limit for Rakotch maps.

mod boundary;
mod bounds;
mod path;

use thiserror::Error;

use crate::metric::MetricError;

pub use boundary::{check_leray_schauder, LsReport};
pub use bounds::{apriori_norm_bound, lipschitz_bound, step_size, NormBounds};
pub use path::{
    limit_fixed_point, limit_fixed_point_with_ratio, solve_at_t, trace_path, ContinuationPath,
    LimitResult, PathConfig, PathEntry, Terminal, DEFAULT_R_CAP, MIN_STEP,
};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ContinuationError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{0}")]
    Argument(String),
    #[error("the origin is not an interior point of the domain")]
    OriginNotInterior,
    #[error("modulus {0} claims to be Rakotch but phi(1) = 1")]
    InconsistentModulus(String),
    #[error("iterate left the domain at t = {t}: {point:?}")]
    DomainExit { t: f64, point: Vec<f64> },
    #[error("inner solve at t = {t} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        t: f64,
        iterations: usize,
        residual: f64,
    },
    #[error("Leray-Schauder condition fails at t = {t}: T x = {lambda} x at x = {x:?}")]
    LsViolation { t: f64, x: Vec<f64>, lambda: f64 },
    #[error("step size underflow at t = {t} (step {step:e})")]
    Stall { t: f64, step: f64 },
    #[error("{0}")]
    NotApplicable(String),
    #[error("limit point residual {residual:e} exceeds {tol:e}")]
    LimitCertificate { residual: f64, tol: f64 },
}
