//! Computable iteration counts and tolerances behind the existence and
//! stability arguments for Rakotch maps.

use crate::metric::Modulus;

use super::PicardError;

/// Relative band within which a computed real is treated as equal to the
/// nearest integer before taking the least integer strictly above it.
///
/// Inputs such as `0.1` are not representable, so a bound whose decimal value is
/// exactly `220` evaluates to `219.99999999999997`. Resolving such ties upward
/// only ever returns a larger (still valid) iteration count.
pub const INTEGER_TIE_TOLERANCE: f64 = 1e-12;

/// Least integer strictly greater than `v >= 0`, with near-integer ties resolved upward.
pub fn least_integer_above(v: f64) -> u64 {
    debug_assert!(v >= 0.0 && v.is_finite());
    (v + INTEGER_TIE_TOLERANCE * v.max(1.0)).floor() as u64 + 1
}

/// `c0` bounds the distance from the anchor `theta` to every seed point and
/// `dtheta` is `d(theta, T theta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs {
    pub c0: f64,
    pub dtheta: f64,
}

impl BoundInputs {
    pub fn new(c0: f64, dtheta: f64) -> Result<BoundInputs, PicardError> {
        if !(c0 >= 0.0 && c0.is_finite()) || !(dtheta >= 0.0 && dtheta.is_finite()) {
            return Err(PicardError::Argument(format!(
                "bound inputs must be nonnegative and finite, got c0 = {c0}, dtheta = {dtheta}"
            )));
        }
        Ok(BoundInputs { c0, dtheta })
    }
}

fn positive(name: &str, v: f64) -> Result<(), PicardError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(PicardError::Argument(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

/// `1 - phi(t)` for `t > 0`, or an error when the modulus gives no room there.
fn contraction_gap(m: &Modulus, t: f64) -> Result<f64, PicardError> {
    let gap = 1.0 - m.eval(t)?;
    if gap > 0.0 {
        Ok(gap)
    } else {
        Err(PicardError::NotRakotch { t, phi: 1.0 - gap })
    }
}

/// Iteration index after which consecutive orbit steps are at most `epsilon`:
/// least `k > (2 c0 + d(theta, T theta)) / (epsilon (1 - phi(epsilon)))`.
pub fn bound_p2_k(epsilon: f64, m: &Modulus, b: BoundInputs) -> Result<u64, PicardError> {
    positive("epsilon", epsilon)?;
    let gap = contraction_gap(m, epsilon)?;
    Ok(least_integer_above(
        (2.0 * b.c0 + b.dtheta) / (epsilon * gap),
    ))
}

/// Step tolerance that makes any two late iterates of one orbit `delta`-close:
/// `delta (1 - phi(delta)) / 8`, half the strict upper limit `delta (1 - phi(delta)) / 4`.
pub fn bound_p3_eps(delta: f64, m: &Modulus) -> Result<f64, PicardError> {
    positive("delta", delta)?;
    let gap = contraction_gap(m, delta)?;
    Ok(delta * gap / 8.0)
}

/// Iteration count after which orbits from seeds within `c0` of a common anchor
/// are `epsilon`-close: least `k > 4 c0 / ((1 - phi(epsilon)) epsilon)`.
pub fn bound_p4_k(epsilon: f64, m: &Modulus, c0: f64) -> Result<u64, PicardError> {
    positive("epsilon", epsilon)?;
    if !(c0 >= 0.0 && c0.is_finite()) {
        return Err(PicardError::Argument(format!(
            "c0 must be nonnegative, got {c0}"
        )));
    }
    let gap = contraction_gap(m, epsilon)?;
    Ok(least_integer_above(4.0 * c0 / (gap * epsilon)))
}

/// Perturbation size and burn-in length guaranteeing that every `delta`-inexact
/// orbit started within `radius` of the fixed point stays within `epsilon` of it
/// from step `k` on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityConstants {
    /// Seed radius `M`.
    pub radius: f64,
    pub epsilon: f64,
    /// Keeps one inexact step from leaving the `radius`-ball.
    pub delta0: f64,
    /// Keeps one inexact step from leaving the `epsilon`-ball.
    pub delta1: f64,
    pub delta: f64,
    pub k: u64,
}

impl StabilityConstants {
    /// Strict upper limits the three deltas must stay under:
    /// `(M (1 - phi(M/2)) / 4, eps (1 - phi(eps/2)) / 4, eps (1 - phi(eps)) / 4)`.
    pub fn delta_limits(&self, m: &Modulus) -> (f64, f64, f64) {
        let (r, e) = (self.radius, self.epsilon);
        (
            r * (1.0 - m.phi(r / 2.0)) / 4.0,
            e * (1.0 - m.phi(e / 2.0)) / 4.0,
            e * (1.0 - m.phi(e)) / 4.0,
        )
    }

    /// The real the burn-in `k` must exceed: `4 (M + 1) / ((1 - phi(eps)) eps) + 4`.
    pub fn k_threshold(&self, m: &Modulus) -> f64 {
        4.0 * (self.radius + 1.0) / ((1.0 - m.phi(self.epsilon)) * self.epsilon) + 4.0
    }

    /// Names of violated invariants; empty when all hold.
    pub fn violations(&self, m: &Modulus) -> Vec<&'static str> {
        let (lim0, _, lim_eps) = self.delta_limits(m);
        let mut out = Vec::new();
        if !(self.delta0 > 0.0 && self.delta0 < lim0) {
            out.push("delta0 < M(1 - phi(M/2))/4");
        }
        if !(self.delta > 0.0
            && self.delta <= self.delta0
            && self.delta <= self.delta1
            && self.delta <= lim_eps)
        {
            out.push("delta <= min{delta0, delta1, eps(1 - phi(eps))/4}");
        }
        if !((self.k as f64) > self.k_threshold(m)) {
            out.push("k > 4(M+1)/((1 - phi(eps)) eps) + 4");
        }
        out
    }

    /// Whether an externally chosen perturbation size respects the strict limits.
    pub fn admits_delta(&self, m: &Modulus, delta: f64) -> bool {
        let (a, b, c) = self.delta_limits(m);
        delta >= 0.0 && delta < a.min(b).min(c)
    }
}

/// Constants for seed radius `radius` and target accuracy `epsilon`.
///
/// `delta0 = M (1 - phi(M/2)) / 8`, `delta1 = eps (1 - phi(eps/2)) / 8`,
/// `delta = min{delta0, delta1, eps (1 - phi(eps)) / 4} / 2` and `k` the least
/// integer above `4 (M + 1) / ((1 - phi(eps)) eps) + 4`.
pub fn stability_constants(
    radius: f64,
    epsilon: f64,
    m: &Modulus,
) -> Result<StabilityConstants, PicardError> {
    positive("M", radius)?;
    positive("epsilon", epsilon)?;
    if !m.is_rakotch() {
        return Err(PicardError::NotRakotch {
            t: epsilon,
            phi: m.phi(epsilon),
        });
    }
    let gap_half_radius = contraction_gap(m, radius / 2.0)?;
    let gap_half_eps = contraction_gap(m, epsilon / 2.0)?;
    let gap_eps = contraction_gap(m, epsilon)?;

    let delta0 = radius * gap_half_radius / 8.0;
    let delta1 = epsilon * gap_half_eps / 8.0;
    let delta = 0.5 * delta0.min(delta1).min(epsilon * gap_eps / 4.0);
    let k = least_integer_above(4.0 * (radius + 1.0) / (gap_eps * epsilon) + 4.0);
    Ok(StabilityConstants {
        radius,
        epsilon,
        delta0,
        delta1,
        delta,
        k,
    })
}
