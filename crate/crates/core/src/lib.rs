//! Fixed-point engine for contractive mappings.
//!
//! * [`metric`]: normed coordinate spaces, contraction moduli, domains and mappings.
//! * [`picard`]: exact and perturbed Picard orbits, the fixed-point solver and the
//!   stability constants of inexact iteration.
//! * [`continuation`]: the homotopy `t -> x_t` with `x_t = tT x_t`, its step rule,
//!   norm and Lipschitz bounds, the Leray-Schauder check and the `t -> 1` limit.
//! * [`gallery`]: mapping families with closed-form ground truth.
//! * [`report`]: text serializations used by the experiment runner.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuation;
pub mod gallery;
pub mod metric;
pub mod picard;
pub mod report;

pub use metric::{DomainSet, MappingInstance, Modulus, Point, Space};

/// Engine version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
