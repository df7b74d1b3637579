use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::numkernel::{sym_eigenvalues_with_tol, DenseMatrix, SpectrumReport, DEFAULT_RANK_TOL};
use crate::operators::sixth_order;
use crate::sat::{build_discretization, BoundaryKind};

/// One row of a spectrum sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub alpha: f64,
    pub report: SpectrumReport,
}

/// Eigenvalues of a symmetric matrix family at each α, in grid order.
/// `jobs > 1` evaluates points on a worker pool; the output order is fixed
/// by the grid, not by completion.
pub fn spectrum_sweep<F>(alphas: &[f64], jobs: usize, build: F) -> Result<Vec<SpectrumPoint>>
where
    F: Fn(f64) -> Result<DenseMatrix> + Sync,
{
    let eval = |&alpha: &f64| -> Result<SpectrumPoint> {
        let m = build(alpha)?;
        Ok(SpectrumPoint {
            alpha,
            report: sym_eigenvalues_with_tol(&m, DEFAULT_RANK_TOL)?,
        })
    };
    if jobs <= 1 {
        return alphas.iter().map(eval).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| crate::Error::InvalidArgument(format!("worker pool: {e}")))?;
    pool.install(|| alphas.par_iter().map(eval).collect())
}

/// Matrix families whose spectra are swept over α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpectrumFamily {
    /// `A` of the order-6 operator.
    A { n: usize },
    /// `D_N = −H⁻¹A` (through its symmetric similarity transform).
    Neumann { n: usize },
    /// `D_D` with Dirichlet conditions on both sides.
    Dirichlet { n: usize, phi: f64 },
    /// Dirichlet at `x = 0`, Neumann at `x = 1`.
    Mixed { n: usize, phi: f64 },
}

impl SpectrumFamily {
    /// Symmetric matrix whose eigenvalues are those of the family member.
    pub fn matrix(&self, alpha: f64) -> Result<DenseMatrix> {
        let (n, left, right, phi) = match *self {
            SpectrumFamily::A { n } => return Ok(sixth_order(n, alpha)?.a().clone()),
            SpectrumFamily::Neumann { n } => (n, BoundaryKind::Neumann, BoundaryKind::Neumann, 1.0),
            SpectrumFamily::Dirichlet { n, phi } => (n, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet, phi),
            SpectrumFamily::Mixed { n, phi } => (n, BoundaryKind::Dirichlet, BoundaryKind::Neumann, phi),
        };
        let op = sixth_order(n, alpha)?;
        let disc = build_discretization(&op, left, right, phi)?;
        Ok(disc.similar_symmetric())
    }

    pub fn sweep(&self, alphas: &[f64], jobs: usize) -> Result<Vec<SpectrumPoint>> {
        spectrum_sweep(alphas, jobs, |a| self.matrix(a))
    }
}

/// Index and value of the smallest spectral radius along a sweep.
pub fn argmin_spectral_radius(points: &[SpectrumPoint]) -> Option<(f64, f64)> {
    points
        .iter()
        .map(|p| (p.alpha, p.report.spectral_radius))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}
