//! Dense real linear algebra: LU with row pivoting, cyclic Jacobi
//! eigen-decomposition, numeric rank and a rank-revealing least-squares solve.

mod eigen;
mod lstsq;
mod lu;
mod matrix;

pub use eigen::{
    default_rank_tol, numeric_rank, sym_eigen, sym_eigenvalues, sym_eigenvalues_with_tol,
    SpectrumReport, SymmetricEigen, DEFAULT_RANK_TOL, RANK_TOL_ENV,
};
pub use lstsq::{min_norm_least_squares, LeastSquaresSolution};
pub use lu::{lu_solve, LuFactorization, DEFAULT_PIVOT_TOL};
pub use matrix::DenseMatrix;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// `a − b` elementwise.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Unit basis vector `e_k` of length `len`.
pub fn unit(len: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; len];
    e[k] = 1.0;
    e
}

/// Smallest eigenvalue of `Pᵀ S P` where the columns of `P` span the
/// orthogonal complement of `span(basis)`.
pub fn min_eig_on_complement(s: &DenseMatrix, basis: &[Vec<f64>]) -> crate::Result<f64> {
    let p = orthogonal_complement(s.rows(), basis);
    let reduced = p.transpose().matmul(&s.matmul(&p));
    Ok(sym_eigenvalues(&reduced.symmetrized())?.min_eigenvalue)
}

/// Orthonormal basis (as columns) of the complement of `span(basis)` in ℝⁿ,
/// via modified Gram–Schmidt on `basis` followed by the unit vectors.
pub fn orthogonal_complement(n: usize, basis: &[Vec<f64>]) -> DenseMatrix {
    let mut q: Vec<Vec<f64>> = Vec::new();
    let push = |v: &[f64], q: &mut Vec<Vec<f64>>| -> bool {
        let mut w = v.to_vec();
        // two passes keep orthogonality at machine precision
        for _ in 0..2 {
            for u in q.iter() {
                let c = dot(u, &w);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
        }
        let nw = norm2(&w);
        if nw > 1e-8 * norm2(v).max(f64::MIN_POSITIVE) {
            q.push(w.iter().map(|x| x / nw).collect());
            true
        } else {
            false
        }
    };
    for v in basis {
        push(v, &mut q);
    }
    let k = q.len();
    for j in 0..n {
        if q.len() == n {
            break;
        }
        push(&unit(n, j), &mut q);
    }
    DenseMatrix::from_fn(n, n - k, |i, j| q[k + j][i])
}
