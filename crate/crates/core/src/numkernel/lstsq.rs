use crate::error::{Error, Result};

use super::DenseMatrix;

const MAX_SWEEPS: usize = 60;

/// Minimum-norm least-squares solution of a possibly rank-deficient system,
/// with an orthonormal basis of the nullspace.
#[derive(Debug, Clone)]
pub struct LeastSquaresSolution {
    pub solution: Vec<f64>,
    pub rank: usize,
    /// Orthonormal nullspace basis vectors.
    pub nullspace: Vec<Vec<f64>>,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// `‖M x − b‖∞` of the returned solution.
    pub residual: f64,
}

/// One-sided (Hestenes) Jacobi SVD: returns `(W, V)` with `M V = W` and the
/// columns of `W` mutually orthogonal.
fn one_sided_jacobi(m: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = m.clone();
    let mut v = DenseMatrix::identity(cols);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    alpha += w[(i, p)] * w[(i, p)];
                    beta += w[(i, q)] * w[(i, q)];
                    gamma += w[(i, p)] * w[(i, q)];
                }
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (a, b) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * a - s * b;
                    w[(i, q)] = s * a + c * b;
                }
                for i in 0..cols {
                    let (a, b) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * a - s * b;
                    v[(i, q)] = s * a + c * b;
                }
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

/// Solves `min ‖M x − b‖₂` with minimal `‖x‖₂`. Singular values below
/// `rel_tol · σ_max` are treated as zero and their right singular vectors
/// form the returned nullspace.
pub fn min_norm_least_squares(
    m: &DenseMatrix,
    b: &[f64],
    rel_tol: f64,
) -> Result<LeastSquaresSolution> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            m.rows()
        )));
    }
    let (w, v) = one_sided_jacobi(m)?;
    let cols = m.cols();
    let sigma: Vec<f64> = (0..cols).map(|j| w.column(j).iter().map(|a| a * a).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let smax = sigma[order[0]];
    let cutoff = rel_tol * smax;

    let mut solution = vec![0.0; cols];
    let mut nullspace = Vec::new();
    let mut rank = 0;
    for &j in &order {
        let vj = v.column(j);
        if sigma[j] > cutoff && smax > 0.0 {
            rank += 1;
            // uⱼᵀ b / σⱼ with uⱼ = wⱼ / σⱼ
            let coef = w.column(j).iter().zip(b).map(|(a, c)| a * c).sum::<f64>() / (sigma[j] * sigma[j]);
            for (x, vi) in solution.iter_mut().zip(&vj) {
                *x += coef * vi;
            }
        } else {
            nullspace.push(vj);
        }
    }

    let r: Vec<f64> = m.matvec(&solution).iter().zip(b).map(|(a, c)| a - c).collect();
    let residual = r.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
    Ok(LeastSquaresSolution {
        solution,
        rank,
        nullspace,
        singular_values: order.iter().map(|&j| sigma[j]).collect(),
        residual,
    })
}
