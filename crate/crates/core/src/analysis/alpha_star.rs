use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{sym_eigenvalues, DenseMatrix};
use crate::operators::{sixth, sixth_order, InteriorOrder};
use crate::pseudoinverse::factor_interior;

/// The two α values at which `Ā(α)` becomes singular.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaStarResult {
    pub n: usize,
    /// Ascending. The larger one is the PSD threshold α*.
    pub roots: [f64; 2],
    /// Eigenvalues of `Ēᵀ Ā₄₉₀⁻¹ Ē`, ascending.
    pub eigenvalues_2x2: [f64; 2],
}

impl AlphaStarResult {
    /// α*: smallest α with `A` positive semi-definite.
    pub fn alpha_star(&self) -> f64 {
        self.roots[1]
    }
}

/// Eigenvalues of a symmetric 2×2 matrix `[[a, b], [b, d]]`, ascending.
fn eig2(a: f64, b: f64, d: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    [mean - radius, mean + radius]
}

/// Columns of `Ē` (length `n − 1`): the free direction `k` restricted to
/// interior nodes 1..5, and its mirror at the right end.
pub fn free_direction_columns(n: usize) -> [Vec<f64>; 2] {
    let m = n - 1;
    let mut left = vec![0.0; m];
    let mut right = vec![0.0; m];
    for i in 1..6 {
        let k = sixth::FREE_DIRECTION[i] as f64;
        left[i - 1] = k;
        right[m - i] = k;
    }
    [left, right]
}

/// Roots of `det Ā(α) = 0` from the Weinstein–Aronszajn identity:
/// `Ā(α) = Ā₄₉₀ + (α − 490)/(180h)·ĒĒᵀ` is singular at `α = 490 − 180h/λ̃`
/// for each eigenvalue `λ̃` of `Ēᵀ Ā₄₉₀⁻¹ Ē`.
pub fn alpha_star(n: usize) -> Result<AlphaStarResult> {
    InteriorOrder::Sixth.check_grid(n)?;
    let op = sixth_order(n, sixth::CLASSICAL_ALPHA)?;
    let lu = factor_interior(&op)?;
    let [e1, e2] = free_direction_columns(n);
    let y1 = lu.solve(&e1)?;
    let y2 = lu.solve(&e2)?;
    let dot = crate::numkernel::dot;
    let m11 = dot(&e1, &y1);
    let m22 = dot(&e2, &y2);
    let m12 = 0.5 * (dot(&e1, &y2) + dot(&e2, &y1));
    let lambda = eig2(m11, m12, m22);
    if lambda.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "Weinstein-Aronszajn eigenvalues not positive: {lambda:?}"
        )));
    }
    let h = 1.0 / n as f64;
    let mut roots = [
        sixth::CLASSICAL_ALPHA - sixth::A_SCALE * h / lambda[0],
        sixth::CLASSICAL_ALPHA - sixth::A_SCALE * h / lambda[1],
    ];
    roots.sort_by(f64::total_cmp);
    Ok(AlphaStarResult {
        n,
        roots,
        eigenvalues_2x2: lambda,
    })
}

/// Minimum eigenvalue of the interior block `Ā(α)`.
pub fn interior_min_eigenvalue(n: usize, alpha: f64) -> Result<f64> {
    let op = sixth_order(n, alpha)?;
    Ok(sym_eigenvalues(&op.interior_block())?.min_eigenvalue)
}

/// α* located by bisection on the sign of the smallest eigenvalue of
/// `Ā(α)` in `[lo, hi]`, to width `tol`.
pub fn alpha_star_spectral(n: usize, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    if interior_min_eigenvalue(n, hi)? < 0.0 || interior_min_eigenvalue(n, lo)? >= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bisection bracket [{lo}, {hi}] does not contain the PSD threshold"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if interior_min_eigenvalue(n, mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ĒĒᵀ/(180h)` embedded in the full index space: `dA/dα`.
pub fn alpha_derivative_of_a(n: usize) -> DenseMatrix {
    let len = n + 1;
    let mut k = DenseMatrix::zeros(len, len);
    let scale = n as f64 / sixth::A_SCALE;
    for i in 0..6 {
        for j in 0..6 {
            let v = (sixth::FREE_DIRECTION[i] * sixth::FREE_DIRECTION[j]) as f64 * scale;
            k[(i, j)] = v;
            k[(len - 1 - i, len - 1 - j)] = v;
        }
    }
    k
}
