use std::fmt;

use super::MetricError;

/// The family a [`Modulus`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusKind {
    /// `phi(t) = c` for a fixed `c` in `[0, 1]`.
    Constant,
    /// `phi(t) = 1 / (1 + a t)` with `a > 0`.
    RationalDecay,
    /// Piecewise-linear interpolation of a knot table, constant past the last knot.
    PiecewiseTable,
    /// `phi = 1`; the nonexpansive sentinel.
    Nonexpansive,
}

impl ModulusKind {
    pub fn name(self) -> &'static str {
        match self {
            ModulusKind::Constant => "constant",
            ModulusKind::RationalDecay => "rational-decay",
            ModulusKind::PiecewiseTable => "piecewise-table",
            ModulusKind::Nonexpansive => "nonexpansive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Constant(f64),
    RationalDecay(f64),
    Table(Vec<(f64, f64)>),
    Nonexpansive,
}

/// The contraction-factor function `phi` in `d(Tx, Ty) <= phi(d(x, y)) d(x, y)`.
///
/// Values lie in `[0, 1]`. A modulus is *Rakotch* when `phi(t) < 1` for every
/// `t > 0`; the nonexpansive sentinel and `Constant(1)` are not.
#[derive(Clone, Debug, PartialEq)]
pub struct Modulus {
    repr: Repr,
}

impl Modulus {
    pub fn constant(c: f64) -> Result<Modulus, MetricError> {
        if !(0.0..=1.0).contains(&c) {
            return Err(MetricError::Argument(format!(
                "constant modulus must lie in [0, 1], got {c}"
            )));
        }
        Ok(Modulus {
            repr: Repr::Constant(c),
        })
    }

    /// `phi(t) = 1 / (1 + t)`.
    pub fn rational_decay() -> Modulus {
        Modulus {
            repr: Repr::RationalDecay(1.0),
        }
    }

    /// `phi(t) = 1 / (1 + scale * t)`.
    pub fn rational_decay_scaled(scale: f64) -> Result<Modulus, MetricError> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(MetricError::Argument(format!(
                "rational-decay scale must be positive and finite, got {scale}"
            )));
        }
        Ok(Modulus {
            repr: Repr::RationalDecay(scale),
        })
    }

    /// Knots `(t_i, phi_i)` with `t_0 = 0`, strictly increasing `t_i` and values in
    /// `[0, 1]`. The values are *not* required to be non-increasing here; that is
    /// what [`Modulus::check_admissible`] reports on.
    pub fn table(knots: Vec<(f64, f64)>) -> Result<Modulus, MetricError> {
        let Some(&(t0, _)) = knots.first() else {
            return Err(MetricError::Argument(
                "modulus table needs at least one knot".into(),
            ));
        };
        if t0 != 0.0 {
            return Err(MetricError::Argument(format!(
                "modulus table must start at t = 0, got {t0}"
            )));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) || !w[1].0.is_finite() {
                return Err(MetricError::Argument(
                    "modulus table knots must be strictly increasing and finite".into(),
                ));
            }
        }
        if let Some(&(t, v)) = knots.iter().find(|(_, v)| !(0.0..=1.0).contains(v)) {
            return Err(MetricError::Argument(format!(
                "modulus table value at t = {t} is {v}, outside [0, 1]"
            )));
        }
        Ok(Modulus {
            repr: Repr::Table(knots),
        })
    }

    pub fn nonexpansive() -> Modulus {
        Modulus {
            repr: Repr::Nonexpansive,
        }
    }

    pub fn kind(&self) -> ModulusKind {
        match self.repr {
            Repr::Constant(_) => ModulusKind::Constant,
            Repr::RationalDecay(_) => ModulusKind::RationalDecay,
            Repr::Table(_) => ModulusKind::PiecewiseTable,
            Repr::Nonexpansive => ModulusKind::Nonexpansive,
        }
    }

    /// Flat parameter list: the constant, the decay scale, or `t0, v0, t1, v1, ...`.
    pub fn params(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Constant(c) => vec![*c],
            Repr::RationalDecay(a) => vec![*a],
            Repr::Table(k) => k.iter().flat_map(|&(t, v)| [t, v]).collect(),
            Repr::Nonexpansive => Vec::new(),
        }
    }

    /// Build from a kind name and a flat parameter list (the configuration form).
    pub fn from_parts(kind: &str, params: &[f64]) -> Result<Modulus, MetricError> {
        match kind {
            "constant" => match params {
                [c] => Modulus::constant(*c),
                _ => Err(MetricError::Argument(
                    "constant modulus takes one parameter".into(),
                )),
            },
            "rational-decay" => match params {
                [] => Ok(Modulus::rational_decay()),
                [a] => Modulus::rational_decay_scaled(*a),
                _ => Err(MetricError::Argument(
                    "rational-decay modulus takes at most one parameter".into(),
                )),
            },
            "piecewise-table" => {
                if params.is_empty() || !params.len().is_multiple_of(2) {
                    return Err(MetricError::Argument(
                        "piecewise-table modulus takes (t, value) pairs".into(),
                    ));
                }
                Modulus::table(params.chunks(2).map(|c| (c[0], c[1])).collect())
            }
            "nonexpansive" => Ok(Modulus::nonexpansive()),
            other => Err(MetricError::Argument(format!(
                "unknown modulus kind `{other}`"
            ))),
        }
    }

    /// True when `phi(t) < 1` for all `t > 0`.
    pub fn is_rakotch(&self) -> bool {
        match &self.repr {
            Repr::Constant(c) => *c < 1.0,
            Repr::RationalDecay(_) => true,
            // Linear interpolation between knots stays below 1 on (0, inf) exactly
            // when every knot past the origin does (and a lone knot is a constant).
            Repr::Table(k) => match k.as_slice() {
                [(_, v)] => *v < 1.0,
                knots => knots[1..].iter().all(|&(_, v)| v < 1.0),
            },
            Repr::Nonexpansive => false,
        }
    }

    /// `phi(t)`, rejecting negative or non-finite `t`.
    pub fn eval(&self, t: f64) -> Result<f64, MetricError> {
        if t.is_nan() || t < 0.0 {
            return Err(MetricError::NegativeArgument(t));
        }
        Ok(self.phi(t))
    }

    /// `phi(t)` for `t >= 0` (callers validate).
    pub(crate) fn phi(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Constant(c) => *c,
            Repr::RationalDecay(a) => 1.0 / (1.0 + a * t),
            Repr::Table(knots) => {
                let idx = knots.partition_point(|&(tk, _)| tk <= t);
                if idx >= knots.len() {
                    return knots[knots.len() - 1].1;
                }
                let (t0, v0) = knots[idx - 1];
                let (t1, v1) = knots[idx];
                let w = (t - t0) / (t1 - t0);
                // The clamp keeps rounding from overshooting the next knot value.
                (v0 + w * (v1 - v0)).clamp(v0.min(v1), v0.max(v1))
            }
            Repr::Nonexpansive => 1.0,
        }
    }

    /// Check monotonicity and the `phi(t) < 1` requirement on a sorted grid.
    pub fn check_admissible(&self, grid: &[f64]) -> Result<AdmissibilityReport, MetricError> {
        if grid.is_empty() {
            return Err(MetricError::Argument("admissibility grid is empty".into()));
        }
        if let Some(&t) = grid.iter().find(|t| t.is_nan() || **t < 0.0) {
            return Err(MetricError::NegativeArgument(t));
        }
        if grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(MetricError::Argument(
                "admissibility grid is not sorted ascending".into(),
            ));
        }
        let values: Vec<f64> = grid.iter().map(|&t| self.phi(t)).collect();
        let monotonicity_violations = grid
            .windows(2)
            .zip(values.windows(2))
            .filter(|(_, v)| v[1] > v[0])
            .map(|(t, _)| (t[0], t[1]))
            .collect();
        let not_below_one = grid
            .iter()
            .zip(&values)
            .filter(|(t, v)| **t > 0.0 && **v >= 1.0)
            .map(|(t, _)| *t)
            .collect();
        Ok(AdmissibilityReport {
            grid_points: grid.len(),
            monotonicity_violations,
            not_below_one,
        })
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind().name())?;
        let p = self.params();
        if !p.is_empty() {
            let parts: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

/// Outcome of [`Modulus::check_admissible`].
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub grid_points: usize,
    /// Consecutive grid pairs `(t_a, t_b)` with `phi(t_b) > phi(t_a)`.
    pub monotonicity_violations: Vec<(f64, f64)>,
    /// Grid points `t > 0` with `phi(t) >= 1`.
    pub not_below_one: Vec<f64>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.monotonicity_violations.is_empty() && self.not_below_one.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_decay_values() {
        let m = Modulus::rational_decay();
        assert_eq!(m.eval(0.0).unwrap(), 1.0);
        assert!((m.eval(0.1).unwrap() - 0.909_090_909_090_909).abs() < 1e-15);
    }

    #[test]
    fn constant_value() {
        let m = Modulus::constant(0.5).unwrap();
        assert_eq!(m.eval(7.3).unwrap(), 0.5);
        assert!(m.is_rakotch());
        assert!(!Modulus::constant(1.0).unwrap().is_rakotch());
        assert!(Modulus::constant(1.5).is_err());
    }

    #[test]
    fn negative_argument_rejected() {
        let m = Modulus::rational_decay();
        assert!(matches!(
            m.eval(-1e-3),
            Err(MetricError::NegativeArgument(_))
        ));
        assert!(m.eval(f64::NAN).is_err());
    }

    #[test]
    fn table_interpolates_and_extends() {
        let m = Modulus::table(vec![(0.0, 1.0), (1.0, 0.8), (3.0, 0.4)]).unwrap();
        assert_eq!(m.eval(0.0).unwrap(), 1.0);
        assert!((m.eval(0.5).unwrap() - 0.9).abs() < 1e-15);
        assert!((m.eval(2.0).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(m.eval(10.0).unwrap(), 0.4);
        assert!(m.is_rakotch());
        assert!(!Modulus::table(vec![(0.0, 0.5), (1.0, 1.0)])
            .unwrap()
            .is_rakotch());
        assert!(Modulus::table(vec![(0.5, 0.5)]).is_err());
        assert!(Modulus::table(vec![(0.0, 0.5), (0.0, 0.4)]).is_err());
    }

    #[test]
    fn admissible_rational_decay() {
        let r = Modulus::rational_decay()
            .check_admissible(&[0.0, 0.5, 1.0, 10.0])
            .unwrap();
        assert!(r.is_admissible());
    }

    #[test]
    fn nonexpansive_flagged() {
        let m = Modulus::nonexpansive();
        assert!(!m.is_rakotch());
        let r = m.check_admissible(&[0.0, 1.0]).unwrap();
        assert_eq!(r.not_below_one, vec![1.0]);
        assert!(!r.is_admissible());
    }

    #[test]
    fn table_monotonicity_violation() {
        let m = Modulus::table(vec![(0.0, 0.9), (1.0, 0.95)]).unwrap();
        let r = m.check_admissible(&[0.0, 1.0]).unwrap();
        assert_eq!(r.monotonicity_violations, vec![(0.0, 1.0)]);
        assert!(r.not_below_one.is_empty());
    }

    #[test]
    fn unsorted_grid_rejected() {
        let m = Modulus::rational_decay();
        assert!(m.check_admissible(&[1.0, 0.5]).is_err());
        assert!(m.check_admissible(&[]).is_err());
    }

    #[test]
    fn from_parts_round_trip() {
        for m in [
            Modulus::constant(0.25).unwrap(),
            Modulus::rational_decay_scaled(2.0).unwrap(),
            Modulus::table(vec![(0.0, 1.0), (2.0, 0.5)]).unwrap(),
            Modulus::nonexpansive(),
        ] {
            let back = Modulus::from_parts(m.kind().name(), &m.params()).unwrap();
            assert_eq!(back, m);
        }
    }
}
