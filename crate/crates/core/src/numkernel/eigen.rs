use serde::Serialize;

use crate::error::{Error, Result};

use super::DenseMatrix;

/// Default relative tolerance for [`numeric_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Environment variable that overrides [`DEFAULT_RANK_TOL`] in the CLI.
pub const RANK_TOL_ENV: &str = "SBP_RANK_TOL";

const SYMMETRY_TOL: f64 = 1e-12;
const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Rank tolerance from `SBP_RANK_TOL` if it parses to a positive number,
/// otherwise [`DEFAULT_RANK_TOL`].
pub fn default_rank_tol() -> f64 {
    std::env::var(RANK_TOL_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|v| v.is_finite() && *v > 0.0)
        .unwrap_or(DEFAULT_RANK_TOL)
}

/// Eigenvalues of a symmetric matrix together with derived quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub spectral_radius: f64,
    pub min_eigenvalue: f64,
    pub numeric_rank: usize,
    /// Absolute threshold: `rel_tol · max|λ|`.
    pub tolerance_used: f64,
}

impl SpectrumReport {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, rel_tol: f64) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let spectral_radius = eigenvalues.iter().fold(0.0, |m: f64, l| m.max(l.abs()));
        let tolerance_used = rel_tol * spectral_radius;
        let numeric_rank = eigenvalues
            .iter()
            .filter(|l| l.abs() > tolerance_used)
            .count();
        SpectrumReport {
            min_eigenvalue: eigenvalues[0],
            eigenvalues,
            spectral_radius,
            numeric_rank,
            tolerance_used,
        }
    }
}

/// Eigen-decomposition `S = V diag(λ) Vᵀ` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector of `values[k]`.
    pub vectors: DenseMatrix,
}

fn check_symmetric(s: &DenseMatrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigen-solver needs a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let asymmetry = s.asymmetry();
    let threshold = SYMMETRY_TOL * s.norm_inf();
    if asymmetry > threshold {
        return Err(Error::NotSymmetric {
            asymmetry,
            threshold,
        });
    }
    Ok(())
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on the symmetrized input. Returns (unsorted) eigenvalues and
/// optionally the accumulated rotations.
fn jacobi(s: &DenseMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<DenseMatrix>)> {
    check_symmetric(s)?;
    let n = s.rows();
    let mut a = s.symmetrized();
    let mut v = want_vectors.then(|| DenseMatrix::identity(n));
    let target = JACOBI_TOL * a.norm_fro();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= target || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                let tau = sn / (1.0 + c);

                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = arp - sn * (arq + tau * arp);
                    let new_rq = arq + sn * (arp - tau * arq);
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = vrp - sn * (vrq + tau * vrp);
                        v[(r, q)] = vrq + sn * (vrp - tau * vrq);
                    }
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }
    Ok((a.diagonal(), v))
}

/// Full eigen-decomposition of a symmetric matrix, eigenvalues ascending.
pub fn sym_eigen(s: &DenseMatrix) -> Result<SymmetricEigen> {
    let (values, vectors) = jacobi(s, true)?;
    let vectors = vectors.expect("vectors requested");
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors =
        DenseMatrix::from_fn(vectors.rows(), vectors.cols(), |i, j| vectors[(i, order[j])]);
    Ok(SymmetricEigen {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// Eigenvalues of a symmetric matrix with rank counted at [`DEFAULT_RANK_TOL`].
pub fn sym_eigenvalues(s: &DenseMatrix) -> Result<SpectrumReport> {
    sym_eigenvalues_with_tol(s, DEFAULT_RANK_TOL)
}

pub fn sym_eigenvalues_with_tol(s: &DenseMatrix, rel_tol: f64) -> Result<SpectrumReport> {
    let (values, _) = jacobi(s, false)?;
    Ok(SpectrumReport::from_eigenvalues(values, rel_tol))
}

/// Number of eigenvalues with `|λ| > rel_tol · max|λ|`.
pub fn numeric_rank(s: &DenseMatrix, rel_tol: f64) -> Result<usize> {
    Ok(sym_eigenvalues_with_tol(s, rel_tol)?.numeric_rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_spectrum() {
        let r = sym_eigenvalues(&DenseMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(r.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_eq!(r.spectral_radius, 3.0);
        assert_eq!(r.numeric_rank, 3);
    }

    #[test]
    fn reflection_spectrum() {
        let s = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = sym_eigenvalues(&s).unwrap();
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((r.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_laplacian_closed_form() {
        let n = 20;
        let s = DenseMatrix::from_fn(n - 1, n - 1, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let r = sym_eigenvalues(&s).unwrap();
        for (k, l) in r.eigenvalues.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / n as f64).cos();
            assert!((l - exact).abs() < 1e-12, "k={k}: {l} vs {exact}");
        }
    }

    #[test]
    fn rank_of_zero_and_rank_one() {
        assert_eq!(numeric_rank(&DenseMatrix::zeros(4, 4), 1e-9).unwrap(), 0);
        let ones = DenseMatrix::from_fn(6, 6, |_, _| 1.0);
        assert_eq!(numeric_rank(&ones, 1e-9).unwrap(), 1);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let s = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eigenvalues(&s), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn eigenvectors_reconstruct_matrix() {
        let s = DenseMatrix::from_fn(7, 7, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let e = sym_eigen(&s).unwrap();
        let vl = e.vectors.scale_cols(&e.values);
        let rebuilt = vl.matmul(&e.vectors.transpose());
        assert!(rebuilt.sub(&s).max_abs() < 1e-13);
        let vtv = e.vectors.transpose().matmul(&e.vectors);
        assert!(vtv.sub(&DenseMatrix::identity(7)).max_abs() < 1e-13);
    }
}
