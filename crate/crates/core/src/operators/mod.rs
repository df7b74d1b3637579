//! Grids and diagonal-norm SBP operators: the narrow second-derivative
//! operator `D2 = H⁻¹(−A − e_L d_Lᵀ + e_R d_Rᵀ)` and the first-derivative
//! operator `D1 = H⁻¹Q` for interior orders 2, 4 and 6.

mod beta;
mod closure;
mod d1;
mod d2;
mod grid;
mod io;
mod order;
pub mod sixth;
mod verify;

pub use beta::{
    calibrate_beta, BetaMap, BETA_ACCURACY, BETA_MIN_BANDWIDTH, BETA_SPECTRAL,
    BETA_SPECTRAL_MIN_ALPHA,
};
pub use closure::{
    fourth_order_corner, implied_norm_weights, solve_closure_system, ClosureSolution,
    ClosureSystem, SolvedClosure,
};
pub use d1::{build_d1, FirstDerivativeFamily, SbpFirstDerivative};
pub use d2::{build_boundary_derivative, build_d2, SbpSecondDerivative};
pub use grid::{make_grid, Grid};
pub use io::{operator_from_json, operator_to_json, OperatorJson};
pub use order::InteriorOrder;
pub use verify::{verify_sbp, CheckResult, SbpReport, VerifySbp};

/// Order-6 operator at the given α on a fresh grid.
pub fn sixth_order(n: usize, alpha: f64) -> crate::Result<SbpSecondDerivative> {
    build_d2(&Grid::new(n)?, InteriorOrder::Sixth, Some(alpha))
}
