use crate::error::{Error, Result};
use crate::numkernel::{lu_solve, DenseMatrix};

use super::closure::{fourth_order_corner, FOURTH_A_HALF, FOURTH_NORM, SECOND_A_HALF};
use super::sixth;
use super::{Grid, InteriorOrder};

/// Narrow-stencil SBP second-derivative operator
/// `D2 = H⁻¹(−A − e_L d_Lᵀ + e_R d_Rᵀ)`.
#[derive(Debug, Clone)]
pub struct SbpSecondDerivative {
    grid: Grid,
    order: InteriorOrder,
    alpha: Option<f64>,
    h_diag: Vec<f64>,
    a: DenseMatrix,
    d_left: Vec<f64>,
    d_right: Vec<f64>,
    d2: DenseMatrix,
}

impl SbpSecondDerivative {
    /// Assembles an operator from its parts, forming `D2`.
    pub fn from_parts(
        grid: Grid,
        order: InteriorOrder,
        alpha: Option<f64>,
        h_diag: Vec<f64>,
        a: DenseMatrix,
        d_left: Vec<f64>,
        d_right: Vec<f64>,
    ) -> Result<Self> {
        let len = grid.len();
        if h_diag.len() != len
            || a.rows() != len
            || a.cols() != len
            || d_left.len() != len
            || d_right.len() != len
        {
            return Err(Error::DimensionMismatch(format!(
                "operator parts must all have dimension {len}"
            )));
        }
        if h_diag.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidArgument("norm weights must be positive".into()));
        }
        let mut hd2 = a.scale(-1.0);
        hd2.add_outer(-1.0, &grid.e_left(), &d_left);
        hd2.add_outer(1.0, &grid.e_right(), &d_right);
        let inv: Vec<f64> = h_diag.iter().map(|w| 1.0 / w).collect();
        let d2 = hd2.scale_rows(&inv);
        Ok(SbpSecondDerivative {
            grid,
            order,
            alpha,
            h_diag,
            a,
            d_left,
            d_right,
            d2,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn order(&self) -> InteriorOrder {
        self.order
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// Diagonal of `H`.
    pub fn h_diag(&self) -> &[f64] {
        &self.h_diag
    }

    pub fn h_inv_diag(&self) -> Vec<f64> {
        self.h_diag.iter().map(|w| 1.0 / w).collect()
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn d_left(&self) -> &[f64] {
        &self.d_left
    }

    pub fn d_right(&self) -> &[f64] {
        &self.d_right
    }

    pub fn d2(&self) -> &DenseMatrix {
        &self.d2
    }

    /// `H·D2 = −A − e_L d_Lᵀ + e_R d_Rᵀ`.
    pub fn h_times_d2(&self) -> DenseMatrix {
        let mut hd2 = self.a.scale(-1.0);
        hd2.add_outer(-1.0, &self.grid.e_left(), &self.d_left);
        hd2.add_outer(1.0, &self.grid.e_right(), &self.d_right);
        hd2
    }

    /// Interior block `Ā` (first and last rows and columns removed).
    pub fn interior_block(&self) -> DenseMatrix {
        crate::pseudoinverse::extract_interior(&self.a)
    }
}

/// Minimal-width one-sided first-derivative stencil at `x = 0` of the given
/// order of accuracy (`order + 1` points), solved from the moment system
/// `Σⱼ dⱼ jᵏ = δ_{k1}` and scaled by `1/h`.
pub fn build_boundary_derivative(order_of_accuracy: usize, h: f64) -> Vec<f64> {
    let m = order_of_accuracy + 1;
    let v = DenseMatrix::from_fn(m, m, |k, j| (j as f64).powi(k as i32));
    let mut rhs = vec![0.0; m];
    if m > 1 {
        rhs[1] = 1.0;
    }
    let d = lu_solve(&v, &rhs).expect("Vandermonde system on distinct nodes is nonsingular");
    d.into_iter().map(|c| c / h).collect()
}

pub(crate) fn norm_weights(order: InteriorOrder, grid: &Grid) -> Vec<f64> {
    let n = grid.n();
    let len = grid.len();
    let mut h = vec![grid.h(); len];
    let boundary: Vec<f64> = match order {
        InteriorOrder::Second => vec![1.0 / (2.0 * n as f64)],
        InteriorOrder::Fourth => FOURTH_NORM.iter().map(|w| w / n as f64).collect(),
        InteriorOrder::Sixth => sixth::NORM_BOUNDARY
            .iter()
            .map(|&w| w as f64 / (sixth::NORM_DENOMINATOR as f64 * n as f64))
            .collect(),
    };
    for (i, w) in boundary.into_iter().enumerate() {
        h[i] = w;
        h[len - 1 - i] = w;
    }
    h
}

/// Symmetric banded matrix with `half[d]·scale` on the d-th off-diagonals.
fn banded(len: usize, half: &[f64], scale: f64) -> DenseMatrix {
    let q = half.len() - 1;
    let mut a = DenseMatrix::zeros(len, len);
    for i in 0..len {
        for j in i.saturating_sub(q)..(i + q + 1).min(len) {
            a[(i, j)] = half[i.abs_diff(j)] * scale;
        }
    }
    a
}

/// Writes `corner` at the top left and its index-reversed mirror at the
/// bottom right.
fn place_corners(a: &mut DenseMatrix, corner: &DenseMatrix) {
    let len = a.rows();
    let m = corner.rows();
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = corner[(i, j)];
            a[(len - 1 - i, len - 1 - j)] = corner[(i, j)];
        }
    }
}

/// Builds the SBP second-derivative operator of the given interior order.
/// `alpha` is required for order 6 and ignored otherwise.
pub fn build_d2(grid: &Grid, order: InteriorOrder, alpha: Option<f64>) -> Result<SbpSecondDerivative> {
    order.check_grid(grid.n())?;
    let len = grid.len();
    let n = grid.n() as f64;
    let (a, alpha) = match order {
        InteriorOrder::Second => {
            let mut a = banded(len, &SECOND_A_HALF, n);
            place_corners(&mut a, &DenseMatrix::from_diag(&[n]));
            (a, None)
        }
        InteriorOrder::Fourth => {
            let mut a = banded(len, &FOURTH_A_HALF, n);
            place_corners(&mut a, &fourth_order_corner().scale(n));
            (a, None)
        }
        InteriorOrder::Sixth => {
            let alpha = alpha.ok_or(Error::MissingAlpha)?;
            if !alpha.is_finite() {
                return Err(Error::InvalidArgument(format!("alpha must be finite, got {alpha}")));
            }
            let half: Vec<f64> = sixth::A_INTERIOR_HALF
                .iter()
                .map(|v| v / sixth::A_SCALE)
                .collect();
            let mut a = banded(len, &half, n);
            let corner = DenseMatrix::from_fn(6, 6, |i, j| sixth::a_corner_entry(i, j, alpha, grid.n()));
            place_corners(&mut a, &corner);
            (a, Some(alpha))
        }
    };
    let h_diag = norm_weights(order, grid);
    let mut d_left = vec![0.0; len];
    let stencil = build_boundary_derivative(order.boundary_order() + 1, grid.h());
    d_left[..stencil.len()].copy_from_slice(&stencil);
    let d_right: Vec<f64> = d_left.iter().rev().map(|v| -v).collect();
    SbpSecondDerivative::from_parts(grid.clone(), order, alpha, h_diag, a, d_left, d_right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_stencils() {
        let d2 = build_boundary_derivative(2, 1.0);
        for (a, b) in d2.iter().zip([-1.5, 2.0, -0.5]) {
            assert!((a - b).abs() < 1e-14);
        }
        let d4 = build_boundary_derivative(4, 0.5);
        for (a, b) in d4.iter().zip([-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25]) {
            assert!((a - 2.0 * b).abs() < 1e-12);
        }
        for order in 2..=4 {
            assert!(build_boundary_derivative(order, 0.1).iter().sum::<f64>().abs() < 1e-11);
        }
    }

    #[test]
    fn sixth_order_first_entries() {
        let g = Grid::new(24).unwrap();
        let op = build_d2(&g, InteriorOrder::Sixth, Some(490.0)).unwrap();
        let expected = (-19697.0 / 72.0 + 490.0) / (180.0 * g.h());
        assert!((op.a()[(0, 0)] - expected).abs() < 1e-12 * expected.abs());
        assert_eq!(op.h_diag()[0], 13649.0 / (43200.0 * 24.0));
        assert_eq!(op.h_diag()[12], g.h());
    }

    #[test]
    fn second_order_a_on_linear() {
        let g = Grid::new(4).unwrap();
        let op = build_d2(&g, InteriorOrder::Second, None).unwrap();
        let ax = op.a().matvec(&g.monomial(1));
        let expected = [-1.0, 0.0, 0.0, 0.0, 1.0];
        for (a, b) in ax.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn missing_alpha_and_small_grids() {
        let g = Grid::new(24).unwrap();
        assert_eq!(build_d2(&g, InteriorOrder::Sixth, None).unwrap_err(), Error::MissingAlpha);
        let small = Grid::new(10).unwrap();
        assert!(matches!(
            build_d2(&small, InteriorOrder::Sixth, Some(490.0)),
            Err(Error::GridTooSmall { .. })
        ));
        assert!(matches!(
            build_d2(&Grid::new(6).unwrap(), InteriorOrder::Fourth, None),
            Err(Error::GridTooSmall { .. })
        ));
    }
}
