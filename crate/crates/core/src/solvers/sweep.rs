use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::operators::sixth_order;
use crate::sat::{build_discretization, BoundaryKind};

use super::manufactured::ManufacturedSolution;
use super::poisson::poisson_solve;

/// Boundary configuration of an optimum sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepTask {
    /// Dirichlet on both sides.
    Dirichlet,
    /// Dirichlet at `x = 0`, Neumann at `x = 1`.
    Mixed,
}

impl SweepTask {
    pub fn boundaries(self) -> (BoundaryKind, BoundaryKind) {
        match self {
            SweepTask::Dirichlet => (BoundaryKind::Dirichlet, BoundaryKind::Dirichlet),
            SweepTask::Mixed => (BoundaryKind::Dirichlet, BoundaryKind::Neumann),
        }
    }
}

impl FromStr for SweepTask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(SweepTask::Dirichlet),
            "mixed" => Ok(SweepTask::Mixed),
            other => Err(Error::InvalidArgument(format!("unknown sweep task {other:?} (dirichlet, mixed)"))),
        }
    }
}

impl fmt::Display for SweepTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepTask::Dirichlet => "dirichlet",
            SweepTask::Mixed => "mixed",
        })
    }
}

/// One `(α, φ)` cell of the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub phi: f64,
    pub n: usize,
    pub h_norm: f64,
    pub l2_norm: f64,
    pub max_norm: f64,
    pub rho: f64,
    /// `h_norm` over its minimum on the grid.
    pub rel_error: f64,
    /// `rho` over its minimum on the grid.
    pub rel_rho: f64,
    /// Not dominated in `(rel_error, rel_rho)` by any other cell.
    pub pareto: bool,
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "alpha", "phi", "n", "h_norm", "l2_norm", "max_norm", "rho", "rel_error", "rel_rho", "pareto",
];

impl SweepRow {
    pub fn csv_record(&self) -> Vec<String> {
        vec![
            fmt_f64(self.alpha),
            fmt_f64(self.phi),
            self.n.to_string(),
            fmt_f64(self.h_norm),
            fmt_f64(self.l2_norm),
            fmt_f64(self.max_norm),
            fmt_f64(self.rho),
            fmt_f64(self.rel_error),
            fmt_f64(self.rel_rho),
            u8::from(self.pareto).to_string(),
        ]
    }
}

/// Rows in grid order (α outer, φ inner).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub task: SweepTask,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Cell nearest to `(alpha, phi)`.
    pub fn nearest(&self, alpha: f64, phi: f64) -> Option<&SweepRow> {
        self.rows.iter().min_by(|a, b| {
            let da = (a.alpha - alpha).abs() + (a.phi - phi).abs();
            let db = (b.alpha - alpha).abs() + (b.phi - phi).abs();
            da.total_cmp(&db)
        })
    }

    pub fn frontier(&self) -> Vec<&SweepRow> {
        let mut f: Vec<&SweepRow> = self.rows.iter().filter(|r| r.pareto).collect();
        f.sort_by(|a, b| a.rel_error.total_cmp(&b.rel_error));
        f
    }

    /// Smallest `rel_rho` among cells with `rel_error ≤ max_rel_error`.
    pub fn min_rel_rho_within(&self, max_rel_error: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.rel_error <= max_rel_error)
            .min_by(|a, b| a.rel_rho.total_cmp(&b.rel_rho))
    }
}

/// α from 481.4 to 495 in steps of 0.1, plus 482.56.
pub fn default_alpha_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (4814..=4950).map(|k| k as f64 / 10.0).collect();
    g.push(482.56);
    g.sort_by(f64::total_cmp);
    g
}

/// 50 log-spaced φ in [1.01, 32], plus 1.19, 1.64 and 1.70.
pub fn default_phi_grid() -> Vec<f64> {
    let (lo, hi) = (1.01f64.ln(), 32f64.ln());
    let mut g: Vec<f64> = (0..50).map(|k| (lo + (hi - lo) * k as f64 / 49.0).exp()).collect();
    g.extend([1.19, 1.64, 1.70]);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Marks cells not dominated in `(e, r)`; ties count as non-dominated.
pub fn pareto_flags(points: &[(f64, f64)]) -> Vec<bool> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a].0.total_cmp(&points[b].0).then(points[a].1.total_cmp(&points[b].1))
    });
    let mut flags = vec![false; points.len()];
    let mut best: Option<(f64, f64)> = None;
    for i in order {
        let (e, r) = points[i];
        match best {
            None => {
                flags[i] = true;
                best = Some((e, r));
            }
            Some((be, br)) => {
                if r < br {
                    flags[i] = true;
                    best = Some((e, r));
                } else if r == br && e == be {
                    flags[i] = true;
                }
            }
        }
    }
    flags
}

/// Poisson error (u = x⁵) and `ρ(D)` over an `(α, φ)` grid, with relative
/// values and the Pareto frontier.
pub fn optimum_sweep(n: usize, alphas: &[f64], phis: &[f64], task: SweepTask, jobs: usize) -> Result<SweepTable> {
    if alphas.is_empty() || phis.is_empty() {
        return Err(Error::InvalidArgument("sweep grids must be non-empty".into()));
    }
    if let Some(p) = phis.iter().find(|p| !(**p > 1.0)) {
        return Err(Error::InvalidPhi(*p));
    }
    let ms = ManufacturedSolution::poly5();
    let (left, right) = task.boundaries();
    let cell = |&(alpha, phi): &(f64, f64)| -> Result<SweepRow> {
        let op = sixth_order(n, alpha)?;
        let disc = build_discretization(&op, left, right, phi)?;
        let sol = poisson_solve(&disc, &ms)?;
        Ok(SweepRow {
            alpha,
            phi,
            n,
            h_norm: sol.report.h_norm,
            l2_norm: sol.report.l2_norm,
            max_norm: sol.report.max_norm,
            rho: disc.spectral_radius()?,
            rel_error: f64::NAN,
            rel_rho: f64::NAN,
            pareto: false,
        })
    };
    let cells: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| phis.iter().map(move |&p| (a, p))).collect();
    let mut rows: Vec<SweepRow> = if jobs <= 1 {
        cells.iter().map(cell).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
        pool.install(|| cells.par_iter().map(cell).collect::<Result<_>>())?
    };

    let min_err = rows.iter().map(|r| r.h_norm).fold(f64::INFINITY, f64::min);
    let min_rho = rows.iter().map(|r| r.rho).fold(f64::INFINITY, f64::min);
    for r in rows.iter_mut() {
        r.rel_error = r.h_norm / min_err;
        r.rel_rho = r.rho / min_rho;
    }
    let flags = pareto_flags(&rows.iter().map(|r| (r.rel_error, r.rel_rho)).collect::<Vec<_>>());
    rows.iter_mut().zip(flags).for_each(|(r, f)| r.pareto = f);
    Ok(SweepTable { task, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pareto_of_simple_set() {
        let pts = [(1.0, 5.0), (2.0, 2.0), (3.0, 3.0), (4.0, 1.0), (2.0, 2.0)];
        assert_eq!(pareto_flags(&pts), vec![true, true, false, true, true]);
    }

    #[test]
    fn grids_contain_anchors() {
        let a = default_alpha_grid();
        assert!(a.contains(&490.0) && a.contains(&482.56) && a.contains(&481.4));
        let p = default_phi_grid();
        assert_eq!(p.len(), 53);
        assert!(p.contains(&1.19) && p.contains(&1.64) && p.contains(&1.70));
        assert!((p[0] - 1.01).abs() < 1e-12 && (p[52] - 32.0).abs() < 1e-9);
    }

    #[test]
    fn parallel_matches_serial() {
        let alphas = [483.0, 490.0];
        let phis = [1.5, 4.0];
        let a = optimum_sweep(12, &alphas, &phis, SweepTask::Dirichlet, 1).unwrap();
        let b = optimum_sweep(12, &alphas, &phis, SweepTask::Dirichlet, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.rows.iter().any(|r| r.rel_error == 1.0));
    }
}
