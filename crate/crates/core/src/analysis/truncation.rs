use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::dot;
use crate::operators::{sixth_order, Grid, InteriorOrder, SbpSecondDerivative};

use super::alpha_star::alpha_derivative_of_a;

/// Weighting of the truncation-vector norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TruncationNorm {
    /// `√(rᵀr)`.
    L2,
    /// `√(rᵀHr)`.
    H,
}

/// Test function for row `i`: `(x − c)⁵` centred on the nearest boundary and
/// its exact second derivative. Both choices share the fifth derivative, and
/// the operator is exact on the degree-4 difference, so `−D2 w + w''` is the
/// same vector either way; centring avoids cancellation near `x = 1`.
fn centred_quintic(grid: &Grid) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let shifted = |c: f64| -> (Vec<f64>, Vec<f64>) {
        let w = grid.map(|x| (x - c).powi(5));
        let w2 = grid.map(|x| 20.0 * (x - c).powi(3));
        (w, w2)
    };
    let (wl, wl2) = shifted(0.0);
    let (wr, wr2) = shifted(1.0);
    (wl, wl2, wr, wr2)
}

fn truncation_with(op: &SbpSecondDerivative) -> Vec<f64> {
    let grid = op.grid();
    let len = grid.len();
    let (wl, wl2, wr, wr2) = centred_quintic(grid);
    (0..len)
        .map(|i| {
            let (w, w2) = if 2 * i < len { (&wl, &wl2) } else { (&wr, &wr2) };
            -dot(op.d2().row(i), w) + w2[i]
        })
        .collect()
}

/// `r = −D2·x⁵ + 20x³`: zero in the interior, `O(h³)` at the boundary rows.
pub fn truncation_vector(op: &SbpSecondDerivative) -> Result<Vec<f64>> {
    if op.order() != InteriorOrder::Sixth {
        return Err(Error::InvalidArgument("truncation vector is defined for order 6".into()));
    }
    Ok(truncation_with(op))
}

/// `r(α) = r₀ + α r₁` on a grid, with `r₁ = H⁻¹ (dA/dα) w` taken exactly.
pub fn truncation_line(grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
    let op0 = sixth_order(grid.n(), 0.0)?;
    let r0 = truncation_with(&op0);
    let k = alpha_derivative_of_a(grid.n());
    let (wl, _, wr, _) = centred_quintic(grid);
    let len = grid.len();
    let hinv = op0.h_inv_diag();
    let r1 = (0..len)
        .map(|i| {
            let w = if 2 * i < len { &wl } else { &wr };
            hinv[i] * dot(k.row(i), w)
        })
        .collect();
    Ok((r0, r1))
}

/// α minimizing the chosen norm of `r(α)`, in closed form:
/// `α = −⟨r₀, r₁⟩_W / ⟨r₁, r₁⟩_W`.
pub fn truncation_optimal_alpha(grid: &Grid, norm: TruncationNorm) -> Result<f64> {
    let (r0, r1) = truncation_line(grid)?;
    let weights = match norm {
        TruncationNorm::L2 => vec![1.0; grid.len()],
        TruncationNorm::H => sixth_order(grid.n(), 0.0)?.h_diag().to_vec(),
    };
    let num: f64 = r0.iter().zip(&r1).zip(&weights).map(|((a, b), w)| a * b * w).sum();
    let den: f64 = r1.iter().zip(&weights).map(|(b, w)| b * b * w).sum();
    Ok(-num / den)
}

/// Numerators and denominators of the boundary entries
/// `rᵢ = ±h³(aᵢ − 28800α)/bᵢ`, i = 0..5 (signs alternate starting with +).
pub const TRUNCATION_NUMERATORS: [f64; 6] =
    [12536750.0, 13794742.0, 13929546.0, 13980554.0, 13950358.0, 13841550.0];
pub const TRUNCATION_DENOMINATORS: [f64; 6] = [13649.0, 12013.0, 2711.0, 5359.0, 7877.0, 43801.0];

/// Closed form of the boundary entry `i` (0..5) of `r` at the left end.
pub fn truncation_boundary_entry(i: usize, alpha: f64, h: f64) -> f64 {
    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
    sign * h.powi(3) * (TRUNCATION_NUMERATORS[i] - 28800.0 * alpha) / TRUNCATION_DENOMINATORS[i]
}
