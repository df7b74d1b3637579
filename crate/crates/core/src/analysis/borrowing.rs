use serde::Serialize;

use crate::error::Result;
use crate::numkernel::{dot, sym_eigenvalues, DenseMatrix};
use crate::operators::SbpSecondDerivative;
use crate::pseudoinverse::build_g2;

/// Borrowing capacity γ and the two scalars it is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BorrowingResult {
    pub gamma: f64,
    /// `ξ_L = ξ_R = 1 + d_Lᵀ G2 d_L`.
    pub xi_boundary: f64,
    /// `ξ_C = 1 + d_Rᵀ G2 d_L`.
    pub xi_cross: f64,
}

/// `γ = 1 / (h (ξ_LR + |ξ_C|))`. Fails with `SingularInterior` when `Ā` is
/// singular (α = α*).
pub fn borrowing_capacity(op: &SbpSecondDerivative) -> Result<BorrowingResult> {
    let g2 = build_g2(op)?;
    let dl = op.d_left();
    let dr = op.d_right();
    let g2dl = g2.matvec(dl);
    let xi_boundary = 1.0 + dot(dl, &g2dl);
    let xi_cross = 1.0 + dot(dr, &g2dl);
    let gamma = 1.0 / (op.grid().h() * (xi_boundary + xi_cross.abs()));
    Ok(BorrowingResult {
        gamma,
        xi_boundary,
        xi_cross,
    })
}

/// `A − hγ(d_L d_Lᵀ + d_R d_Rᵀ)`.
pub fn borrowed_matrix(op: &SbpSecondDerivative, gamma: f64) -> DenseMatrix {
    let h = op.grid().h();
    let mut m = op.a().clone();
    m.add_outer(-h * gamma, op.d_left(), op.d_left());
    m.add_outer(-h * gamma, op.d_right(), op.d_right());
    m
}

/// Smallest eigenvalue of [`borrowed_matrix`]; non-negative (to rounding)
/// exactly when `gamma` does not exceed the borrowing capacity.
pub fn borrowing_min_eigenvalue(op: &SbpSecondDerivative, gamma: f64) -> Result<f64> {
    Ok(sym_eigenvalues(&borrowed_matrix(op, gamma))?.min_eigenvalue)
}
