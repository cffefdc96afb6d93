//! Normed coordinate spaces, contraction moduli, domain sets and mappings.

mod domain;
mod mapping;
mod modulus;
mod space;

use thiserror::Error;

pub use domain::DomainSet;
pub use mapping::{
    verify_contractive, ContractivityReport, MappingInstance, PairCheck, DEFAULT_SLACK,
};
pub use modulus::{AdmissibilityReport, Modulus, ModulusKind};
pub use space::{NormKind, Point, Space};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("argument must be a nonnegative number, got {0}")]
    NegativeArgument(f64),
    #[error("{0}")]
    Argument(String),
    #[error("point {point:?} lies outside the mapping's domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// `phi(t)` with argument validation.
pub fn eval_modulus(m: &Modulus, t: f64) -> Result<f64, MetricError> {
    m.eval(t)
}

/// Admissibility of `m` on a sorted grid.
pub fn check_modulus_admissible(
    m: &Modulus,
    grid: &[f64],
) -> Result<AdmissibilityReport, MetricError> {
    m.check_admissible(grid)
}
