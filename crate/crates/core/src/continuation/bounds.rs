use crate::metric::Modulus;

use super::ContinuationError;

fn check_q(q: f64) -> Result<(), ContinuationError> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(ContinuationError::Argument(format!(
            "q must lie in (0, 1), got {q}"
        )))
    }
}

/// Parameter increment that keeps `B[x_{t0}, r]` invariant under `tT`:
/// half of the strict limit `min{r (1 - q) / (1 + |T x_{t0}|), q - t0}`.
pub fn step_size(r: f64, q: f64, norm_tx: f64, t0: f64) -> Result<f64, ContinuationError> {
    if !(r > 0.0) {
        return Err(ContinuationError::Argument(format!(
            "ball radius r must be positive, got {r}"
        )));
    }
    check_q(q)?;
    if !(t0 >= 0.0 && t0 < q) {
        return Err(ContinuationError::Argument(format!(
            "need 0 <= t0 < q, got t0 = {t0}, q = {q}"
        )));
    }
    if !(norm_tx >= 0.0) {
        return Err(ContinuationError::Argument(format!(
            "|T x| must be nonnegative, got {norm_tx}"
        )));
    }
    Ok(0.5 * (r * (1.0 - q) / (1.0 + norm_tx)).min(q - t0))
}

/// A-priori bounds on `|x_t|` along the path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormBounds {
    /// `|T0| / (1 - q)`, valid for `t <= q` and any nonexpansive map.
    pub nonexpansive: f64,
    /// `max(1, |T0| / (1 - phi(1)))`, valid on all of `[0, 1)` when the modulus
    /// is Rakotch; `None` otherwise.
    pub rakotch: Option<f64>,
}

pub fn apriori_norm_bound(
    norm_t0: f64,
    q: f64,
    m: &Modulus,
) -> Result<NormBounds, ContinuationError> {
    check_q(q)?;
    if !(norm_t0 >= 0.0 && norm_t0.is_finite()) {
        return Err(ContinuationError::Argument(format!(
            "|T0| must be nonnegative, got {norm_t0}"
        )));
    }
    let rakotch = if m.is_rakotch() {
        let phi1 = m.eval(1.0)?;
        if phi1 >= 1.0 {
            return Err(ContinuationError::InconsistentModulus(m.to_string()));
        }
        Some(1f64.max(norm_t0 / (1.0 - phi1)))
    } else {
        None
    };
    Ok(NormBounds {
        nonexpansive: norm_t0 / (1.0 - q),
        rakotch,
    })
}

/// `|t_a - t_b| M / (1 - q)`, the Lipschitz bound of the path on `[0, q]`.
pub fn lipschitz_bound(t_a: f64, t_b: f64, m_bound: f64, q: f64) -> Result<f64, ContinuationError> {
    check_q(q)?;
    for t in [t_a, t_b] {
        if !(t >= 0.0 && t <= q) {
            return Err(ContinuationError::Argument(format!(
                "Lipschitz bound needs 0 <= t <= q = {q}, got t = {t}"
            )));
        }
    }
    if !(m_bound >= 0.0 && m_bound.is_finite()) {
        return Err(ContinuationError::Argument(format!(
            "M must be nonnegative, got {m_bound}"
        )));
    }
    Ok((t_a - t_b).abs() * m_bound / (1.0 - q))
}
