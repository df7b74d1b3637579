//! Poisson, heat and wave solvers on SAT discretizations, checked against
//! manufactured solutions.

mod manufactured;
mod norms;
mod poisson;
mod sweep;
mod time;

pub use manufactured::{Equation, ManufacturedSolution};
pub use norms::{error_norms, observed_rate, ErrorReport};
pub use poisson::{poisson_solve, poisson_solve_with, PoissonSolution};
pub use sweep::{
    default_alpha_grid, default_phi_grid, optimum_sweep, pareto_flags, SweepRow, SweepTable, SweepTask,
    SWEEP_COLUMNS,
};
pub use time::{
    default_heat_dt, heat_dt_limit, heat_solve, heat_solve_with, wave_dt_limit, wave_solve, wave_solve_with,
    MarchOptions, Trajectory, BLOWUP_FACTOR, DEFAULT_SNAPSHOT_STRIDE, HEAT_DT_LIMIT, HEAT_DT_SAFETY,
    WAVE_DEFAULT_DT, WAVE_DT_LIMIT,
};
