use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{min_eig_on_complement, sym_eigenvalues, DenseMatrix};
use crate::operators::{build_d1, calibrate_beta, sixth_order, BetaMap, Grid, InteriorOrder, SbpFirstDerivative, SbpSecondDerivative};

use super::alpha_star::alpha_star;

/// Upper end of the α search in [`compatibility_min_alpha`].
pub const ALPHA_SEARCH_MAX: f64 = 600.0;
const ALPHA_TOL: f64 = 1e-7;
const PSD_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompatibilityReport {
    pub alpha: f64,
    /// NaN when the first-derivative operator carries no calibrated β.
    pub beta: f64,
    pub min_eig_r: f64,
    pub compatible: bool,
}

/// `R = A − D1ᵀ H D1 = A − Qᵀ H⁻¹ Q`.
pub fn compatibility_matrix(op2: &SbpSecondDerivative, op1: &SbpFirstDerivative) -> DenseMatrix {
    let hinv = op2.h_inv_diag();
    let q = op1.q();
    let qt_hinv_q = q.transpose().matmul(&q.scale_rows(&hinv));
    op2.a().sub(&qt_hinv_q).symmetrized()
}

/// PSD test of `R`: compatible ⇔ `min eig(R) ≥ −1e-10·‖R‖∞`.
pub fn compatibility(op2: &SbpSecondDerivative, op1: &SbpFirstDerivative) -> Result<CompatibilityReport> {
    if op2.grid() != op1.grid() {
        return Err(Error::DimensionMismatch("D1 and D2 live on different grids".into()));
    }
    let mismatch = op2
        .h_diag()
        .iter()
        .zip(op1.h_diag())
        .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs() / a.abs()));
    if mismatch > NORM_TOL {
        return Err(Error::NormMismatch(mismatch));
    }
    let r = compatibility_matrix(op2, op1);
    let min_eig_r = sym_eigenvalues(&r)?.min_eigenvalue;
    Ok(CompatibilityReport {
        alpha: op2.alpha().unwrap_or(f64::NAN),
        beta: op1.beta().unwrap_or(f64::NAN),
        min_eig_r,
        compatible: min_eig_r >= -PSD_TOL * r.norm_inf(),
    })
}

/// Smallest eigenvalue of `R` on the complement of span{1, x, x², x³}, which
/// `R` always annihilates. Its sign change locates the compatibility
/// threshold cleanly.
fn projected_min_eig(grid: &Grid, alpha: f64, op1: &SbpFirstDerivative) -> Result<f64> {
    let op2 = sixth_order(grid.n(), alpha)?;
    let r = compatibility_matrix(&op2, op1);
    let basis: Vec<Vec<f64>> = (0..4).map(|k| grid.monomial(k)).collect();
    min_eig_on_complement(&r, &basis)
}

fn min_alpha_for_operator(grid: &Grid, op1: &SbpFirstDerivative) -> Result<f64> {
    let mut hi = ALPHA_SEARCH_MAX;
    if projected_min_eig(grid, hi, op1)? < 0.0 {
        return Err(Error::NoCrossing { alpha_max: hi });
    }
    let mut lo = alpha_star(grid.n())?.alpha_star() - 1.0;
    if projected_min_eig(grid, lo, op1)? >= 0.0 {
        return Ok(lo);
    }
    while hi - lo > ALPHA_TOL {
        let mid = 0.5 * (lo + hi);
        if projected_min_eig(grid, mid, op1)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest α for which the order-6 `D1(t)` is compatible with `D2(α)`.
pub fn min_alpha_for_t(grid: &Grid, t: f64) -> Result<f64> {
    let op1 = build_d1(grid, InteriorOrder::Sixth, Some(t))?;
    min_alpha_for_operator(grid, &op1)
}

/// Smallest compatible α for a β under an already calibrated map.
pub fn compatibility_min_alpha_with(map: &BetaMap, beta: f64, grid: &Grid) -> Result<f64> {
    let op1 = map.build_d1(grid, beta)?;
    min_alpha_for_operator(grid, &op1)
}

/// Smallest α in `[α*(n) − 1, 600]` for which `D2(α)` and `D1(β)` are
/// compatible, by bisection to 1e-7. Calibrates the β map on the same grid.
pub fn compatibility_min_alpha(beta: f64, n: usize) -> Result<f64> {
    let grid = Grid::new(n)?;
    let map = calibrate_beta(&grid)?;
    compatibility_min_alpha_with(&map, beta, &grid)
}
