use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{LuFactorization, DEFAULT_PIVOT_TOL};
use crate::pseudoinverse::{solve_neumann_system, NeumannMethod};
use crate::sat::{assemble_forcing, BoundaryKind, SatDiscretization};

use super::manufactured::{Equation, ManufacturedSolution};
use super::norms::{error_norms, ErrorReport};

/// Discrete solution and its error against the manufactured solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonSolution {
    pub v: Vec<f64>,
    pub error: Vec<f64>,
    pub report: ErrorReport,
}

/// Boundary data for `ms` at time `t`: the value on Dirichlet sides, `u_x`
/// on Neumann sides.
pub(crate) fn boundary_data(disc: &SatDiscretization, ms: &ManufacturedSolution, t: f64) -> (f64, f64) {
    let gl = match disc.bc_left() {
        BoundaryKind::Dirichlet => ms.u(0.0, t),
        BoundaryKind::Neumann => ms.u_x(0.0, t),
    };
    let gr = match disc.bc_right() {
        BoundaryKind::Dirichlet => ms.u(1.0, t),
        BoundaryKind::Neumann => ms.u_x(1.0, t),
    };
    (gl, gr)
}

/// Right-hand side `f + b_L g_L + b_R g_R` of `−D v = …` (Poisson) or
/// `v_t = D v + …` (heat, wave).
pub(crate) fn sat_forcing(
    disc: &SatDiscretization,
    ms: &ManufacturedSolution,
    equation: Equation,
    t: f64,
) -> Result<Vec<f64>> {
    let f = disc.op().grid().map(|x| ms.forcing(equation, x, t));
    let (gl, gr) = boundary_data(disc, ms, t);
    assemble_forcing(disc, &f, gl, gr)
}

/// Solves `−u_xx = f` with the SAT discretization, using `A⁺` when both
/// sides are Neumann.
pub fn poisson_solve(disc: &SatDiscretization, ms: &ManufacturedSolution) -> Result<PoissonSolution> {
    poisson_solve_with(disc, ms, NeumannMethod::MoorePenrose)
}

/// Dirichlet/mixed: LU on `−H·D`. Neumann: mean-zero solution of
/// `A v = H·forcing`, with the error taken against `u − mean(u)`.
pub fn poisson_solve_with(
    disc: &SatDiscretization,
    ms: &ManufacturedSolution,
    method: NeumannMethod,
) -> Result<PoissonSolution> {
    let op = disc.op();
    let grid = op.grid();
    let h = op.h_diag();
    let forcing = sat_forcing(disc, ms, Equation::Poisson, 0.0)?;
    let b: Vec<f64> = forcing.iter().zip(h).map(|(f, w)| f * w).collect();
    let u = grid.map(|x| ms.u(x, 0.0));

    let (v, error): (Vec<f64>, Vec<f64>) = if disc.is_pure_neumann() {
        let v = solve_neumann_system(op, &b, method)?;
        let mean = u.iter().sum::<f64>() / u.len() as f64;
        let error = u.iter().zip(&v).map(|(ui, vi)| ui - mean - vi).collect::<Vec<f64>>();
        (v, error)
    } else {
        if disc.phi() <= 1.0 {
            return Err(Error::SingularSystem(format!(
                "phi = {} leaves the Dirichlet system singular; use phi > 1",
                disc.phi()
            )));
        }
        let m = disc.symmetric_form().scale(-1.0);
        let lu = LuFactorization::new(&m, DEFAULT_PIVOT_TOL).map_err(|e| match e {
            Error::SingularMatrix { pivot, threshold } => Error::SingularSystem(format!(
                "pivot {pivot:e} below {threshold:e}"
            )),
            other => other,
        })?;
        let v = lu.solve(&b)?;
        let error = u.iter().zip(&v).map(|(ui, vi)| ui - vi).collect::<Vec<f64>>();
        (v, error)
    };
    let report = error_norms(&error, h)?;
    Ok(PoissonSolution { v, error, report })
}
