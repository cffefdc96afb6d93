use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::domain::DomainSet;
use super::modulus::Modulus;
use super::space::{Point, Space};
use super::MetricError;

/// Absolute slack used when certifying contractivity.
pub const DEFAULT_SLACK: f64 = 1e-12;

type Rule = dyn Fn(&Point) -> Point + Send + Sync;

/// A mapping `T: K -> X` with its declared modulus. `T` is only evaluated on
/// `K`, but its image may leave `K`.
#[derive(Clone)]
pub struct MappingInstance {
    name: String,
    space: Space,
    domain: DomainSet,
    modulus: Modulus,
    rule: Arc<Rule>,
}

impl fmt::Debug for MappingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MappingInstance")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("domain", &self.domain)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

impl MappingInstance {
    pub fn new<F>(
        name: impl Into<String>,
        space: Space,
        domain: DomainSet,
        modulus: Modulus,
        rule: F,
    ) -> Result<MappingInstance, MetricError>
    where
        F: Fn(&Point) -> Point + Send + Sync + 'static,
    {
        if domain.dimension() != space.dimension() {
            return Err(MetricError::DimensionMismatch {
                expected: space.dimension(),
                got: domain.dimension(),
            });
        }
        Ok(MappingInstance {
            name: name.into(),
            space,
            domain,
            modulus,
            rule: Arc::new(rule),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn domain(&self) -> &DomainSet {
        &self.domain
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.domain.contains(&self.space, p)
    }

    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        self.space.distance(a, b)
    }

    pub fn norm(&self, p: &Point) -> f64 {
        self.space.norm(p)
    }

    /// `T x`, failing when `x` is not in the domain.
    pub fn apply(&self, x: &Point) -> Result<Point, MetricError> {
        self.space.check_dim(x)?;
        if !self.contains(x) {
            return Err(MetricError::OutsideDomain {
                point: x.iter().copied().collect(),
            });
        }
        Ok((self.rule)(x))
    }

    /// Replace the declared modulus (used to build deliberately mis-declared maps).
    pub fn with_modulus(mut self, modulus: Modulus) -> MappingInstance {
        self.modulus = modulus;
        self
    }

    /// Uniform draw from `K` intersected with the sup-box of half-width `radius`
    /// around `center`, by rejection. Falls back to projecting the last draw onto
    /// `K` when rejection keeps failing.
    pub fn sample_domain<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        center: &Point,
        radius: f64,
    ) -> Point {
        let box_space = Space::max_norm(self.space.dimension());
        let mut draw = center.clone();
        for _ in 0..256 {
            draw = box_space.sample_ball(rng, center, radius);
            if self.contains(&draw) {
                return draw;
            }
        }
        self.domain.project(&self.space, &draw)
    }
}

/// One sampled pair of a contractivity certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCheck {
    pub distance: f64,
    /// `d(Tx, Ty)`
    pub lhs: f64,
    /// `phi(d(x, y)) d(x, y)`
    pub rhs: f64,
    pub pass: bool,
}

/// Sampled certificate of the contractive inequality. It covers exactly the
/// pairs it lists and nothing more.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractivityReport {
    pub map: String,
    pub modulus: String,
    pub slack: f64,
    pub pairs: Vec<PairCheck>,
}

impl ContractivityReport {
    pub fn pass(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }

    pub fn failures(&self) -> usize {
        self.pairs.iter().filter(|p| !p.pass).count()
    }

    /// Largest `lhs - rhs` over the sample (negative when every pair has room).
    pub fn worst_excess(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.lhs - p.rhs)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Check `d(Tx, Ty) <= phi(d(x, y)) d(x, y) + slack` on every listed pair.
pub fn verify_contractive(
    map: &MappingInstance,
    pairs: &[(Point, Point)],
    slack: f64,
) -> Result<ContractivityReport, MetricError> {
    if slack.is_nan() || slack < 0.0 {
        return Err(MetricError::NegativeArgument(slack));
    }
    let checks = pairs
        .iter()
        .map(|(x, y)| {
            let tx = map.apply(x)?;
            let ty = map.apply(y)?;
            let d = map.distance(x, y);
            let lhs = map.distance(&tx, &ty);
            let rhs = map.modulus().phi(d) * d;
            Ok(PairCheck {
                distance: d,
                lhs,
                rhs,
                pass: lhs <= rhs + slack,
            })
        })
        .collect::<Result<Vec<_>, MetricError>>()?;
    Ok(ContractivityReport {
        map: map.name().to_string(),
        modulus: map.modulus().to_string(),
        slack,
        pairs: checks,
    })
}
