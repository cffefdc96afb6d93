use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::MetricError;

/// A point of the finite-dimensional coordinate space.
pub type Point = DVector<f64>;

/// Which norm induces the distance of a [`Space`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormKind {
    Euclidean,
    Max,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::Euclidean => "euclidean",
            NormKind::Max => "max",
        }
    }

    pub fn parse(s: &str) -> Option<NormKind> {
        match s {
            "euclidean" | "l2" => Some(NormKind::Euclidean),
            "max" | "linf" => Some(NormKind::Max),
            _ => None,
        }
    }
}

/// Real coordinate space of fixed dimension with a norm-induced metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Space {
    dim: usize,
    norm: NormKind,
}

impl Space {
    pub fn new(dim: usize, norm: NormKind) -> Result<Space, MetricError> {
        if dim == 0 {
            return Err(MetricError::Argument(
                "space dimension must be positive".into(),
            ));
        }
        Ok(Space { dim, norm })
    }

    pub fn euclidean(dim: usize) -> Space {
        Space::new(dim, NormKind::Euclidean).expect("positive dimension")
    }

    pub fn max_norm(dim: usize) -> Space {
        Space::new(dim, NormKind::Max).expect("positive dimension")
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn zero(&self) -> Point {
        Point::zeros(self.dim)
    }

    pub fn check_dim(&self, p: &Point) -> Result<(), MetricError> {
        if p.len() != self.dim {
            return Err(MetricError::DimensionMismatch {
                expected: self.dim,
                got: p.len(),
            });
        }
        Ok(())
    }

    pub fn norm(&self, p: &Point) -> f64 {
        match self.norm {
            NormKind::Euclidean => p.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::Max => p.iter().fold(0.0, |acc, v| acc.max(v.abs())),
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        let diffs = a.iter().zip(b.iter()).map(|(x, y)| x - y);
        match self.norm {
            NormKind::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            NormKind::Max => diffs.fold(0.0, |acc, d| acc.max(d.abs())),
        }
    }

    /// Norm of the linear functional `x -> a.x`, i.e. the dual norm of `a`.
    pub(crate) fn dual_norm(&self, a: &Point) -> f64 {
        match self.norm {
            NormKind::Euclidean => a.norm(),
            NormKind::Max => a.iter().map(|v| v.abs()).sum(),
        }
    }

    /// Uniform draw from the closed ball `B[center, radius]` of this norm.
    pub fn sample_ball<R: Rng + ?Sized>(&self, rng: &mut R, center: &Point, radius: f64) -> Point {
        match self.norm {
            NormKind::Euclidean => {
                let mut dir = Point::from_fn(self.dim, |_, _| StandardNormal.sample(rng));
                let len = dir.norm();
                if len == 0.0 {
                    return center.clone();
                }
                let u: f64 = rng.random();
                let scale = radius * u.powf(1.0 / self.dim as f64) / len;
                dir *= scale;
                center + dir
            }
            NormKind::Max => Point::from_fn(self.dim, |i, _| {
                center[i] + radius * rng.random_range(-1.0..=1.0)
            }),
        }
    }
}
