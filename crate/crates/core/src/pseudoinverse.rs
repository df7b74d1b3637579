//! Closed-form Moore–Penrose inverse of the singular matrix `A` of an SBP
//! second-derivative operator, built from the inverse of its interior block,
//! plus the cheaper filtered variant.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{dot, DenseMatrix, LuFactorization};
use crate::operators::SbpSecondDerivative;

/// Relative LU pivot threshold below which `Ā` is declared singular.
pub const INTERIOR_PIVOT_TOL: f64 = 1e-12;

const AG_IDENTITY_TOL: f64 = 1e-8;

/// `Ā`: `A` without its first and last rows and columns.
pub fn extract_interior(a: &DenseMatrix) -> DenseMatrix {
    assert!(a.is_square() && a.rows() >= 3, "interior block needs a square matrix of size >= 3");
    let m = a.rows() - 2;
    a.submatrix(1, 1, m, m)
}

/// LU factorization of `Ā`, mapping a failed pivot to `SingularInterior`.
pub fn factor_interior(op: &SbpSecondDerivative) -> Result<LuFactorization> {
    LuFactorization::new(&op.interior_block(), INTERIOR_PIVOT_TOL).map_err(|e| match e {
        Error::SingularMatrix { pivot, threshold } => Error::SingularInterior { pivot, threshold },
        other => other,
    })
}

fn embed_interior(inner: &DenseMatrix) -> DenseMatrix {
    let mut g = DenseMatrix::zeros(inner.rows() + 2, inner.cols() + 2);
    g.set_block(1, 1, inner);
    g
}

/// Solves `Ā y = b[1..n]` and pads with zeros: `G2 b`.
fn g2_apply(lu: &LuFactorization, b: &[f64]) -> Result<Vec<f64>> {
    let len = b.len();
    let y = lu.solve(&b[1..len - 1])?;
    let mut out = vec![0.0; len];
    out[1..len - 1].copy_from_slice(&y);
    Ok(out)
}

fn remove_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn g2_from(op: &SbpSecondDerivative, lu: &LuFactorization) -> Result<DenseMatrix> {
    let g2 = embed_interior(&lu.inverse()?);
    // A·G2 = I − e_L(1 − x)ᵀ − e_R xᵀ
    let grid = op.grid();
    let x = grid.monomial(1);
    let one_minus_x: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
    let mut expected = DenseMatrix::identity(grid.len());
    expected.add_outer(-1.0, &grid.e_left(), &one_minus_x);
    expected.add_outer(-1.0, &grid.e_right(), &x);
    let residual = op.a().matmul(&g2).sub(&expected).norm_inf();
    if residual > AG_IDENTITY_TOL * expected.norm_inf() {
        return Err(Error::SingularInterior {
            pivot: lu.min_pivot(),
            threshold: INTERIOR_PIVOT_TOL * op.interior_block().norm_inf(),
        });
    }
    Ok(g2)
}

/// `G2`: `Ā⁻¹` bordered by zeros.
pub fn build_g2(op: &SbpSecondDerivative) -> Result<DenseMatrix> {
    let lu = factor_interior(op)?;
    g2_from(op, &lu)
}

fn moore_penrose_from(op: &SbpSecondDerivative, g2: &DenseMatrix) -> DenseMatrix {
    let grid = op.grid();
    let len = grid.len();
    let inv_len = 1.0 / len as f64;
    // P G2 P with P = I − 𝟏𝟏ᵀ/(n+1), done via row/column means
    let row_means: Vec<f64> = (0..len).map(|i| g2.row(i).iter().sum::<f64>() * inv_len).collect();
    let col_means: Vec<f64> = (0..len).map(|j| g2.column(j).iter().sum::<f64>() * inv_len).collect();
    let total_mean = row_means.iter().sum::<f64>() * inv_len;
    let xc: Vec<f64> = grid.nodes().iter().map(|x| x - 0.5).collect();
    DenseMatrix::from_fn(len, len, |i, j| {
        g2[(i, j)] - row_means[i] - col_means[j] + total_mean + xc[i] * xc[j]
    })
}

/// `A⁺ = (I − 𝟏𝟏ᵀ/(n+1)) G2 (I − 𝟏𝟏ᵀ/(n+1)) + (x − 𝟏/2)(x − 𝟏/2)ᵀ`.
pub fn moore_penrose(op: &SbpSecondDerivative) -> Result<DenseMatrix> {
    Ok(moore_penrose_from(op, &build_g2(op)?))
}

fn filtered_from(op: &SbpSecondDerivative, g2: &DenseMatrix) -> DenseMatrix {
    let x = op.grid().monomial(1);
    let mut b = g2.clone();
    b.add_outer(1.0, &x, &x);
    b
}

/// `B = G2 + x xᵀ`: `B A = I + 𝟏 zᵀ`, so `B b` minus its mean solves
/// consistent Neumann systems.
pub fn filtered_pseudoinverse(op: &SbpSecondDerivative) -> Result<DenseMatrix> {
    Ok(filtered_from(op, &build_g2(op)?))
}

/// How to solve the singular system `A v = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NeumannMethod {
    /// Least-squares, mean-zero solution through `A⁺`.
    MoorePenrose,
    /// `G2 b + x (xᵀ b)` with the mean removed. Only valid for `b` in the
    /// column space of `A`; for other `b` the result is not the least-squares
    /// solution.
    Filtered,
}

impl FromStr for NeumannMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moore_penrose" | "moore-penrose" | "mp" => Ok(NeumannMethod::MoorePenrose),
            "filtered" => Ok(NeumannMethod::Filtered),
            other => Err(Error::InvalidArgument(format!("unknown Neumann method {other:?}"))),
        }
    }
}

fn solve_with(op: &SbpSecondDerivative, lu: &LuFactorization, b: &[f64], method: NeumannMethod) -> Result<Vec<f64>> {
    let len = op.grid().len();
    if b.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, expected {len}",
            b.len()
        )));
    }
    let x = op.grid().monomial(1);
    match method {
        NeumannMethod::MoorePenrose => {
            let mut pb = b.to_vec();
            remove_mean(&mut pb);
            let mut v = g2_apply(lu, &pb)?;
            remove_mean(&mut v);
            let xc: Vec<f64> = x.iter().map(|v| v - 0.5).collect();
            let c = dot(&xc, b);
            v.iter_mut().zip(&xc).for_each(|(vi, xi)| *vi += c * xi);
            Ok(v)
        }
        NeumannMethod::Filtered => {
            let mut v = g2_apply(lu, b)?;
            let c = dot(&x, b);
            v.iter_mut().zip(&x).for_each(|(vi, xi)| *vi += c * xi);
            remove_mean(&mut v);
            Ok(v)
        }
    }
}

/// Mean-zero solution of `A v = b`.
pub fn solve_neumann_system(op: &SbpSecondDerivative, b: &[f64], method: NeumannMethod) -> Result<Vec<f64>> {
    let lu = factor_interior(op)?;
    solve_with(op, &lu, b, method)
}

/// Interior factorization, `G2`, `A⁺` and `B` of one operator.
#[derive(Debug, Clone)]
pub struct PseudoinverseBundle {
    source: SbpSecondDerivative,
    interior: LuFactorization,
    g2: DenseMatrix,
    a_plus: DenseMatrix,
    filtered: DenseMatrix,
}

impl PseudoinverseBundle {
    pub fn new(op: &SbpSecondDerivative) -> Result<Self> {
        let interior = factor_interior(op)?;
        let g2 = g2_from(op, &interior)?;
        let a_plus = moore_penrose_from(op, &g2);
        let filtered = filtered_from(op, &g2);
        Ok(PseudoinverseBundle {
            source: op.clone(),
            interior,
            g2,
            a_plus,
            filtered,
        })
    }

    pub fn source(&self) -> &SbpSecondDerivative {
        &self.source
    }

    pub fn interior_factorization(&self) -> &LuFactorization {
        &self.interior
    }

    pub fn g2(&self) -> &DenseMatrix {
        &self.g2
    }

    pub fn a_plus(&self) -> &DenseMatrix {
        &self.a_plus
    }

    pub fn filtered(&self) -> &DenseMatrix {
        &self.filtered
    }

    pub fn solve(&self, b: &[f64], method: NeumannMethod) -> Result<Vec<f64>> {
        solve_with(&self.source, &self.interior, b, method)
    }
}

/// Relative residuals of the four Penrose identities and of the projection
/// identities `A⁺A = AA⁺ = I − 𝟏𝟏ᵀ/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenroseResiduals {
    pub a_ap_a: f64,
    pub ap_a_ap: f64,
    pub a_ap_symmetric: f64,
    pub ap_a_symmetric: f64,
    pub ap_a_projection: f64,
    pub a_ap_projection: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        [
            self.a_ap_a,
            self.ap_a_ap,
            self.a_ap_symmetric,
            self.ap_a_symmetric,
            self.ap_a_projection,
            self.a_ap_projection,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn penrose_residuals(a: &DenseMatrix, ap: &DenseMatrix) -> PenroseResiduals {
    let len = a.rows();
    let a_ap = a.matmul(ap);
    let ap_a = ap.matmul(a);
    let mut proj = DenseMatrix::identity(len);
    proj = proj.sub(&DenseMatrix::from_fn(len, len, |_, _| 1.0 / len as f64));
    let rel = |m: DenseMatrix, scale: f64| m.norm_inf() / scale;
    PenroseResiduals {
        a_ap_a: rel(a_ap.matmul(a).sub(a), a.norm_inf()),
        ap_a_ap: rel(ap_a.matmul(ap).sub(ap), ap.norm_inf()),
        a_ap_symmetric: a_ap.asymmetry() / a_ap.norm_inf(),
        ap_a_symmetric: ap_a.asymmetry() / ap_a.norm_inf(),
        ap_a_projection: rel(ap_a.sub(&proj), proj.norm_inf()),
        a_ap_projection: rel(a_ap.sub(&proj), proj.norm_inf()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_d2, Grid, InteriorOrder};

    #[test]
    fn interior_of_three_by_three() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| (3 * i + j) as f64);
        assert_eq!(extract_interior(&a).to_rows(), vec![vec![4.0]]);
    }

    #[test]
    fn second_order_interior_block() {
        let op = build_d2(&Grid::new(4).unwrap(), InteriorOrder::Second, None).unwrap();
        let abar = extract_interior(op.a());
        let expected = DenseMatrix::from_fn(3, 3, |i, j| match i.abs_diff(j) {
            0 => 8.0,
            1 => -4.0,
            _ => 0.0,
        });
        assert!(abar.sub(&expected).max_abs() < 1e-14);
    }

    #[test]
    fn g2_times_ones_identity() {
        let op = build_d2(&Grid::new(24).unwrap(), InteriorOrder::Sixth, Some(490.0)).unwrap();
        let g2 = build_g2(&op).unwrap();
        let ones = op.grid().ones();
        let lhs = op.a().matvec(&g2.matvec(&ones));
        let half = 25.0 / 2.0;
        for (i, v) in lhs.iter().enumerate() {
            let expected = 1.0 - if i == 0 || i == 24 { half } else { 0.0 };
            assert!((v - expected).abs() < 1e-9, "row {i}: {v}");
        }
    }

    #[test]
    fn neumann_solutions_are_mean_zero_and_agree() {
        let op = build_d2(&Grid::new(24).unwrap(), InteriorOrder::Sixth, Some(484.3)).unwrap();
        let x2 = op.grid().monomial(2);
        let b = op.a().matvec(&x2);
        let mp = solve_neumann_system(&op, &b, NeumannMethod::MoorePenrose).unwrap();
        let fl = solve_neumann_system(&op, &b, NeumannMethod::Filtered).unwrap();
        let mean = x2.iter().sum::<f64>() / 25.0;
        for i in 0..25 {
            assert!((mp[i] - (x2[i] - mean)).abs() < 1e-9);
            assert!((mp[i] - fl[i]).abs() < 1e-9);
        }
        assert!(mp.iter().sum::<f64>().abs() < 1e-10 * 25.0);
    }
}
