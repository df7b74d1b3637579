use crate::error::{Error, Result};

use super::DenseMatrix;

/// Relative pivot threshold used by [`lu_solve`].
pub const DEFAULT_PIVOT_TOL: f64 = 1e-14;

/// LU factorization `P M = L U` with partial (row) pivoting.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: DenseMatrix,
    perm: Vec<usize>,
    min_pivot: f64,
}

impl LuFactorization {
    /// Factorizes `m`, failing with `SingularMatrix` when a pivot magnitude
    /// drops below `rel_pivot_tol · ‖m‖∞`.
    pub fn new(m: &DenseMatrix, rel_pivot_tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let threshold = rel_pivot_tol * m.norm_inf();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;

        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmax > threshold) {
                return Err(Error::SingularMatrix {
                    pivot: pmax,
                    threshold,
                });
            }
            min_pivot = min_pivot.min(pmax);
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    lu[(i, j)] -= l * lu[(k, j)];
                }
            }
        }
        Ok(LuFactorization { lu, perm, min_pivot })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Smallest pivot magnitude encountered during elimination.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, expected {n}",
                b.len()
            )));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, y)| u * y).sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }

    /// Solves for every column of `b`.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve(&b.column(j))?;
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve_matrix(&DenseMatrix::identity(self.dim()))
    }
}

/// Solves `M x = b` by LU with row pivoting.
pub fn lu_solve(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    LuFactorization::new(m, DEFAULT_PIVOT_TOL)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        })
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let b = [1.5, -2.0, 0.25, 7.0, 3.0];
        assert_eq!(lu_solve(&DenseMatrix::identity(5), &b).unwrap(), b.to_vec());
    }

    #[test]
    fn diagonal_solve() {
        let m = DenseMatrix::from_diag(&[2.0, 4.0]);
        assert_eq!(lu_solve(&m, &[2.0, 8.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn tridiagonal_solve() {
        let x = lu_solve(&tridiag(4), &[1.0, 0.0, 0.0, 1.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(lu_solve(&m, &[3.0, 5.0]).unwrap(), vec![5.0, 3.0]);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            lu_solve(&m, &[1.0, 1.0]),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = tridiag(6);
        let inv = LuFactorization::new(&m, DEFAULT_PIVOT_TOL)
            .unwrap()
            .inverse()
            .unwrap();
        let id = m.matmul(&inv);
        assert!(id.sub(&DenseMatrix::identity(6)).max_abs() < 1e-13);
    }
}
