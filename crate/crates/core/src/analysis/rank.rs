use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{numeric_rank, DenseMatrix};
use crate::operators::SbpSecondDerivative;
use crate::pseudoinverse::extract_interior;

const TRANSFORM_TOL: f64 = 1e-9;

/// Numeric ranks of `A` and `Ā` at a relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankRelation {
    pub rank_a: usize,
    pub rank_abar: usize,
    /// `rank_a == rank_abar + 1`.
    pub holds: bool,
}

pub fn check_rank_relation(op: &SbpSecondDerivative, rel_tol: f64) -> Result<RankRelation> {
    let rank_a = numeric_rank(op.a(), rel_tol)?;
    let rank_abar = numeric_rank(&extract_interior(op.a()), rel_tol)?;
    Ok(RankRelation {
        rank_a,
        rank_abar,
        holds: rank_a == rank_abar + 1,
    })
}

/// `Z = [𝟏ᵀ; 0 Ī 0; xᵀ]`.
pub fn sylvester_matrix(op: &SbpSecondDerivative) -> DenseMatrix {
    let grid = op.grid();
    let len = grid.len();
    let x = grid.nodes();
    DenseMatrix::from_fn(len, len, |i, j| {
        if i == 0 {
            1.0
        } else if i == len - 1 {
            x[j]
        } else if i == j {
            1.0
        } else {
            0.0
        }
    })
}

/// `Δ = Z A Zᵀ`, checked against `blockdiag(0, Ā, 1)`.
pub fn sylvester_transform(op: &SbpSecondDerivative) -> Result<DenseMatrix> {
    let z = sylvester_matrix(op);
    let delta = z.matmul(op.a()).matmul(&z.transpose());
    let len = op.grid().len();
    let mut expected = DenseMatrix::zeros(len, len);
    expected.set_block(1, 1, &extract_interior(op.a()));
    expected[(len - 1, len - 1)] = 1.0;
    let residual = delta.sub(&expected).norm_inf();
    let threshold = TRANSFORM_TOL * op.a().norm_inf();
    if residual > threshold {
        return Err(Error::TransformResidual { residual, threshold });
    }
    Ok(delta)
}
