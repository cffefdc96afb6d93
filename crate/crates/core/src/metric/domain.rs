use super::space::{NormKind, Point, Space};
use super::MetricError;

/// A closed set `K` (or the closure of an open `G`) with its interior.
///
/// Every query takes the ambient [`Space`] because distances to the boundary
/// depend on the norm.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSet {
    /// Product of closed intervals; bounds may be infinite.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// `[lower, inf)` on the real line.
    HalfLine { lower: f64 },
    /// Closed ball of the ambient norm.
    Ball { center: Point, radius: f64 },
    /// `{x : normal . x <= offset}`.
    HalfSpace { normal: Point, offset: f64 },
}

impl DomainSet {
    pub fn whole(dim: usize) -> DomainSet {
        DomainSet::Box {
            lower: vec![f64::NEG_INFINITY; dim],
            upper: vec![f64::INFINITY; dim],
        }
    }

    pub fn interval(lower: f64, upper: f64) -> Result<DomainSet, MetricError> {
        DomainSet::boxed(vec![lower], vec![upper])
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<DomainSet, MetricError> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(MetricError::Argument(
                "box bounds must have equal positive length".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(MetricError::Argument(
                "box needs lower < upper in every coordinate".into(),
            ));
        }
        Ok(DomainSet::Box { lower, upper })
    }

    pub fn half_line(lower: f64) -> Result<DomainSet, MetricError> {
        if !lower.is_finite() {
            return Err(MetricError::Argument(
                "half-line bound must be finite".into(),
            ));
        }
        Ok(DomainSet::HalfLine { lower })
    }

    pub fn ball(center: Point, radius: f64) -> Result<DomainSet, MetricError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(MetricError::Argument(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(DomainSet::Ball { center, radius })
    }

    pub fn half_space(normal: Point, offset: f64) -> Result<DomainSet, MetricError> {
        if normal.iter().all(|v| *v == 0.0) || !offset.is_finite() {
            return Err(MetricError::Argument(
                "half-space needs a nonzero normal and finite offset".into(),
            ));
        }
        Ok(DomainSet::HalfSpace { normal, offset })
    }

    /// Build from a kind name and flat parameters (the configuration form):
    /// `box: l1,u1,l2,u2,...`; `halfline: lower`; `ball: c1,..,cd,radius`;
    /// `halfspace: a1,..,ad,offset`.
    pub fn from_parts(kind: &str, params: &[f64]) -> Result<DomainSet, MetricError> {
        match kind {
            "box" => {
                if params.is_empty() || !params.len().is_multiple_of(2) {
                    return Err(MetricError::Argument(
                        "box takes (lower, upper) pairs".into(),
                    ));
                }
                let (lo, hi) = params.chunks(2).map(|c| (c[0], c[1])).unzip();
                DomainSet::boxed(lo, hi)
            }
            "halfline" => match params {
                [l] => DomainSet::half_line(*l),
                _ => Err(MetricError::Argument("halfline takes one parameter".into())),
            },
            "ball" => match params.split_last() {
                Some((r, c)) if !c.is_empty() => DomainSet::ball(Point::from_column_slice(c), *r),
                _ => Err(MetricError::Argument(
                    "ball takes center coordinates then radius".into(),
                )),
            },
            "halfspace" => match params.split_last() {
                Some((b, a)) if !a.is_empty() => {
                    DomainSet::half_space(Point::from_column_slice(a), *b)
                }
                _ => Err(MetricError::Argument(
                    "halfspace takes normal coordinates then offset".into(),
                )),
            },
            "whole" => Err(MetricError::Argument(
                "whole space is a box with infinite bounds".into(),
            )),
            other => Err(MetricError::Argument(format!(
                "unknown domain kind `{other}`"
            ))),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DomainSet::Box { .. } => "box",
            DomainSet::HalfLine { .. } => "halfline",
            DomainSet::Ball { .. } => "ball",
            DomainSet::HalfSpace { .. } => "halfspace",
        }
    }

    /// Dimension implied by the parameters.
    pub fn dimension(&self) -> usize {
        match self {
            DomainSet::Box { lower, .. } => lower.len(),
            DomainSet::HalfLine { .. } => 1,
            DomainSet::Ball { center, .. } => center.len(),
            DomainSet::HalfSpace { normal, .. } => normal.len(),
        }
    }

    /// Signed margin: positive inside (distance to the complement), zero on the
    /// boundary, negative outside.
    fn margin(&self, space: &Space, p: &Point) -> f64 {
        match self {
            DomainSet::Box { lower, upper } => p
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(x, (l, u))| (x - l).min(u - x))
                .fold(f64::INFINITY, f64::min),
            DomainSet::HalfLine { lower } => p[0] - lower,
            DomainSet::Ball { center, radius } => radius - space.distance(p, center),
            DomainSet::HalfSpace { normal, offset } => {
                (offset - normal.dot(p)) / space.dual_norm(normal)
            }
        }
    }

    pub fn contains(&self, space: &Space, p: &Point) -> bool {
        p.len() == self.dimension() && self.margin(space, p) >= 0.0
    }

    pub fn interior_contains(&self, space: &Space, p: &Point) -> bool {
        p.len() == self.dimension() && self.margin(space, p) > 0.0
    }

    /// Distance from `p` to the complement of the set; zero on or outside the boundary.
    pub fn boundary_distance(&self, space: &Space, p: &Point) -> f64 {
        self.margin(space, p).max(0.0)
    }

    /// A nearest point of the set to `p` (identity on members).
    pub fn project(&self, space: &Space, p: &Point) -> Point {
        if self.contains(space, p) {
            return p.clone();
        }
        match self {
            DomainSet::Box { lower, upper } => {
                Point::from_fn(p.len(), |i, _| p[i].clamp(lower[i], upper[i]))
            }
            DomainSet::HalfLine { lower } => Point::from_element(1, *lower),
            DomainSet::Ball { center, radius } => match space.norm_kind() {
                NormKind::Euclidean => {
                    let d = p - center;
                    let n = d.norm();
                    center + d * (*radius / n)
                }
                NormKind::Max => Point::from_fn(p.len(), |i, _| {
                    p[i].clamp(center[i] - radius, center[i] + radius)
                }),
            },
            DomainSet::HalfSpace { normal, offset } => {
                let excess = normal.dot(p) - offset;
                p - half_space_direction(space, normal) * excess
            }
        }
    }

    /// A nearest boundary point to `p`. For points outside the set this is the
    /// projection; inside it is the closest point of the boundary.
    pub fn nearest_boundary_point(&self, space: &Space, p: &Point) -> Option<Point> {
        if !self.interior_contains(space, p) {
            return Some(self.project(space, p));
        }
        match self {
            DomainSet::Box { lower, upper } => {
                let mut best: Option<(f64, usize, f64)> = None;
                for i in 0..p.len() {
                    for face in [lower[i], upper[i]] {
                        let gap = (p[i] - face).abs();
                        if face.is_finite() && best.is_none_or(|(g, _, _)| gap < g) {
                            best = Some((gap, i, face));
                        }
                    }
                }
                best.map(|(_, i, face)| {
                    let mut q = p.clone();
                    q[i] = face;
                    q
                })
            }
            DomainSet::HalfLine { lower } => Some(Point::from_element(1, *lower)),
            DomainSet::Ball { center, radius } => Some(match space.norm_kind() {
                NormKind::Euclidean => {
                    let d = p - center;
                    let n = d.norm();
                    if n == 0.0 {
                        let mut q = center.clone();
                        q[0] += radius;
                        q
                    } else {
                        center + d * (*radius / n)
                    }
                }
                NormKind::Max => {
                    let (i, _) = (p - center)
                        .iter()
                        .enumerate()
                        .fold(
                            (0, -1.0),
                            |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc },
                        );
                    let mut q = p.clone();
                    let sign = if p[i] >= center[i] { 1.0 } else { -1.0 };
                    q[i] = center[i] + sign * radius;
                    q
                }
            }),
            DomainSet::HalfSpace { normal, offset } => {
                let excess = normal.dot(p) - offset;
                Some(p - half_space_direction(space, normal) * excess)
            }
        }
    }

    /// A reference point of the set used to centre sampling boxes.
    pub fn anchor(&self, space: &Space) -> Point {
        self.project(space, &space.zero())
    }
}

// Step direction `v` with `normal . v = 1` whose norm is minimal for the space.
fn half_space_direction(space: &Space, normal: &Point) -> Point {
    match space.norm_kind() {
        NormKind::Euclidean => normal / normal.norm_squared(),
        NormKind::Max => {
            let l1: f64 = normal.iter().map(|v| v.abs()).sum();
            normal.map(|v| v.signum() * (v != 0.0) as u8 as f64 / l1)
        }
    }
}
