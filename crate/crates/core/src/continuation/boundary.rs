use crate::metric::{MappingInstance, Point};

use super::ContinuationError;

/// Outcome of a Leray-Schauder check at one boundary point.
#[derive(Clone, Debug, PartialEq)]
pub struct LsReport {
    pub point: Point,
    pub image: Point,
    /// `|Tx| / |x|`.
    pub ratio: f64,
    /// `|Tx - ratio * x|`; small when `Tx` points along `x`.
    pub alignment_residual: f64,
    /// The `lambda > 1` with `Tx = lambda x` (within tolerance), if one was found.
    pub violation: Option<f64>,
}

impl LsReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Look for `lambda > 1` with `Tx = lambda x` at a boundary point `x`.
///
/// Every `lambda` of the grid is tried, then the aligned candidate
/// `lambda = |Tx| / |x|`, which is flagged when it exceeds `1 + tol` and
/// `|Tx - lambda x| <= tol`.
pub fn check_leray_schauder(
    map: &MappingInstance,
    x: &Point,
    lambda_grid: &[f64],
    tol: f64,
) -> Result<LsReport, ContinuationError> {
    if !(tol > 0.0) {
        return Err(ContinuationError::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(l) = lambda_grid.iter().find(|l| !(**l > 1.0)) {
        return Err(ContinuationError::Argument(format!(
            "lambda grid entries must exceed 1, got {l}"
        )));
    }
    let norm_x = map.norm(x);
    if norm_x == 0.0 {
        return Err(ContinuationError::OriginNotInterior);
    }
    let dist = map.domain().boundary_distance(map.space(), x);
    if dist > tol {
        return Err(ContinuationError::Argument(format!(
            "point is {dist:e} away from the boundary, beyond tolerance {tol:e}"
        )));
    }
    let image = map.apply(x)?;
    let space = map.space();

    let mut violation = lambda_grid
        .iter()
        .copied()
        .find(|&l| space.norm(&(&image - x * l)) <= tol);

    let ratio = space.norm(&image) / norm_x;
    let alignment_residual = space.norm(&(&image - x * ratio));
    if violation.is_none() && ratio > 1.0 + tol && alignment_residual <= tol {
        violation = Some(ratio);
    }
    Ok(LsReport {
        point: x.clone(),
        image,
        ratio,
        alignment_residual,
        violation,
    })
}
