use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;
use crate::sat::SatDiscretization;

use super::manufactured::{Equation, ManufacturedSolution};
use super::norms::{error_norms, h_norm, ErrorReport};
use super::poisson::sat_forcing;

/// RK4 stability limit `dt·ρ(D)` for the heat equation.
pub const HEAT_DT_LIMIT: f64 = 2.5;
/// RK4 limit `dt·√ρ(D)` for the wave equation.
pub const WAVE_DT_LIMIT: f64 = 2.6;
/// Fraction of the heat limit used when no step is given.
pub const HEAT_DT_SAFETY: f64 = 0.5;
pub const WAVE_DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_SNAPSHOT_STRIDE: usize = 10;
/// A run is unstable once the error exceeds this multiple of `‖u(·,0)‖_H`.
pub const BLOWUP_FACTOR: f64 = 1e6;

/// Errors per step and solution snapshots of one time-marching run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Step size actually used (`t_end / steps`).
    pub dt: f64,
    pub steps: usize,
    /// Time after each step.
    pub times: Vec<f64>,
    /// H-norm error after each step.
    pub errors: Vec<f64>,
    /// `(t, v)` every `snapshot_stride` steps, plus the initial and final state.
    pub snapshots: Vec<(f64, Vec<f64>)>,
    /// Norms at `t_end`, with the mean of `errors` in `mean_over_time`.
    pub report: ErrorReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchOptions {
    pub t_end: f64,
    pub dt: f64,
    pub snapshot_stride: usize,
}

impl MarchOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        MarchOptions {
            t_end,
            dt,
            snapshot_stride: DEFAULT_SNAPSHOT_STRIDE,
        }
    }
}

/// Row-compressed copy of a dense matrix; `D` is banded apart from the SAT
/// columns, so this keeps a step at O(n).
struct SparseRows {
    starts: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseRows {
    fn from_dense(m: &DenseMatrix) -> Self {
        let mut starts = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..m.rows() {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != 0.0 {
                    cols.push(j);
                    vals.push(v);
                }
            }
            starts.push(cols.len());
        }
        SparseRows { starts, cols, vals }
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let (a, b) = (self.starts[i], self.starts[i + 1]);
            *o = self.cols[a..b].iter().zip(&self.vals[a..b]).map(|(&j, v)| v * x[j]).sum();
        }
    }
}

/// Classical RK4 for `y' = f(t, y)`, calling `observe(step, t, y)` after
/// every step; `observe` may abort the run.
fn rk4<F, O>(y: &mut [f64], t0: f64, dt: f64, steps: usize, mut f: F, mut observe: O) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    O: FnMut(usize, f64, &[f64]) -> Result<()>,
{
    let len = y.len();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    let mut tmp = vec![0.0; len];
    for step in 0..steps {
        let t = t0 + step as f64 * dt;
        f(t, y, &mut k1)?;
        for i in 0..len {
            tmp[i] = y[i] + 0.5 * dt * k1[i];
        }
        f(t + 0.5 * dt, &tmp, &mut k2)?;
        for i in 0..len {
            tmp[i] = y[i] + 0.5 * dt * k2[i];
        }
        f(t + 0.5 * dt, &tmp, &mut k3)?;
        for i in 0..len {
            tmp[i] = y[i] + dt * k3[i];
        }
        f(t + dt, &tmp, &mut k4)?;
        for i in 0..len {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        observe(step + 1, t0 + (step + 1) as f64 * dt, y)?;
    }
    Ok(())
}

fn step_count(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("t_end must be positive, got {t_end}")));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((steps, t_end / steps as f64))
}

/// Largest heat step allowed for `disc`: `2.5/ρ(D)`.
pub fn heat_dt_limit(disc: &SatDiscretization) -> Result<f64> {
    Ok(HEAT_DT_LIMIT / disc.spectral_radius()?)
}

/// Largest wave step allowed for `disc`: `2.6/√ρ(D)`.
pub fn wave_dt_limit(disc: &SatDiscretization) -> Result<f64> {
    Ok(WAVE_DT_LIMIT / disc.spectral_radius()?.sqrt())
}

/// Default heat step: [`HEAT_DT_SAFETY`] times the limit.
pub fn default_heat_dt(disc: &SatDiscretization) -> Result<f64> {
    Ok(HEAT_DT_SAFETY * heat_dt_limit(disc)?)
}

struct Recorder<'a> {
    h: &'a [f64],
    threshold: f64,
    stride: usize,
    times: Vec<f64>,
    errors: Vec<f64>,
    snapshots: Vec<(f64, Vec<f64>)>,
}

impl<'a> Recorder<'a> {
    fn new(h: &'a [f64], initial_norm: f64, stride: usize) -> Self {
        Recorder {
            h,
            threshold: BLOWUP_FACTOR * initial_norm.max(1e-12),
            stride: stride.max(1),
            times: Vec::new(),
            errors: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    fn record(&mut self, step: usize, t: f64, v: &[f64], exact: &[f64], last: bool) -> Result<()> {
        let eps: Vec<f64> = exact.iter().zip(v).map(|(u, v)| u - v).collect();
        let e = h_norm(&eps, self.h);
        self.times.push(t);
        self.errors.push(e);
        if step % self.stride == 0 || last {
            self.snapshots.push((t, v.to_vec()));
        }
        if !e.is_finite() || e > self.threshold {
            return Err(Error::UnstableStep {
                time: t,
                error: e,
                history: self.times.iter().copied().zip(self.errors.iter().copied()).collect(),
            });
        }
        Ok(())
    }

    fn finish(self, dt: f64, steps: usize, final_eps: &[f64]) -> Result<Trajectory> {
        let mut report = error_norms(final_eps, self.h)?;
        report.mean_over_time = Some(self.errors.iter().sum::<f64>() / self.errors.len() as f64);
        Ok(Trajectory {
            dt,
            steps,
            times: self.times,
            errors: self.errors,
            snapshots: self.snapshots,
            report,
        })
    }
}

/// `u_t = u_xx + f` with `v(0) = u(·, 0)`, marched by RK4.
pub fn heat_solve(disc: &SatDiscretization, ms: &ManufacturedSolution, t_end: f64, dt: f64) -> Result<Trajectory> {
    heat_solve_with(disc, ms, &MarchOptions::new(t_end, dt))
}

pub fn heat_solve_with(disc: &SatDiscretization, ms: &ManufacturedSolution, opts: &MarchOptions) -> Result<Trajectory> {
    let limit = heat_dt_limit(disc)?;
    if opts.dt > limit {
        return Err(Error::TimeStepTooLarge { dt: opts.dt, limit });
    }
    let (steps, dt) = step_count(opts.t_end, opts.dt)?;
    let grid = disc.op().grid();
    let h = disc.op().h_diag();
    let d = SparseRows::from_dense(disc.d());

    let mut v = grid.map(|x| ms.u(x, 0.0));
    let mut rec = Recorder::new(h, h_norm(&v, h), opts.snapshot_stride);
    rec.snapshots.push((0.0, v.clone()));
    let rhs = |t: f64, y: &[f64], out: &mut [f64]| -> Result<()> {
        d.apply(y, out);
        let f = sat_forcing(disc, ms, Equation::Heat, t)?;
        out.iter_mut().zip(&f).for_each(|(o, fi)| *o += fi);
        Ok(())
    };
    rk4(&mut v, 0.0, dt, steps, rhs, |step, t, y| {
        let exact = grid.map(|x| ms.u(x, t));
        rec.record(step, t, y, &exact, step == steps)
    })?;
    let exact = grid.map(|x| ms.u(x, opts.t_end));
    let eps: Vec<f64> = exact.iter().zip(&v).map(|(u, v)| u - v).collect();
    rec.finish(dt, steps, &eps)
}

/// `u_tt = u_xx + f` as the system `v_t = w`, `w_t = D v + forcing`, from
/// exact `v` and `w` at `t = 0`.
pub fn wave_solve(disc: &SatDiscretization, ms: &ManufacturedSolution, t_end: f64, dt: f64) -> Result<Trajectory> {
    wave_solve_with(disc, ms, &MarchOptions::new(t_end, dt))
}

pub fn wave_solve_with(disc: &SatDiscretization, ms: &ManufacturedSolution, opts: &MarchOptions) -> Result<Trajectory> {
    let limit = wave_dt_limit(disc)?;
    if opts.dt > limit {
        return Err(Error::TimeStepTooLarge { dt: opts.dt, limit });
    }
    let (steps, dt) = step_count(opts.t_end, opts.dt)?;
    let grid = disc.op().grid();
    let len = grid.len();
    let h = disc.op().h_diag();
    let d = SparseRows::from_dense(disc.d());

    let mut y = grid.map(|x| ms.u(x, 0.0));
    y.extend(grid.map(|x| ms.u_t(x, 0.0)));
    let mut rec = Recorder::new(h, h_norm(&y[..len], h), opts.snapshot_stride);
    rec.snapshots.push((0.0, y[..len].to_vec()));
    let rhs = |t: f64, y: &[f64], out: &mut [f64]| -> Result<()> {
        let (v, w) = y.split_at(len);
        let (ov, ow) = out.split_at_mut(len);
        ov.copy_from_slice(w);
        d.apply(v, ow);
        let f = sat_forcing(disc, ms, Equation::Wave, t)?;
        ow.iter_mut().zip(&f).for_each(|(o, fi)| *o += fi);
        Ok(())
    };
    rk4(&mut y, 0.0, dt, steps, rhs, |step, t, y| {
        let exact = grid.map(|x| ms.u(x, t));
        rec.record(step, t, &y[..len], &exact, step == steps)
    })?;
    let exact = grid.map(|x| ms.u(x, opts.t_end));
    let eps: Vec<f64> = exact.iter().zip(&y[..len]).map(|(u, v)| u - v).collect();
    rec.finish(dt, steps, &eps)
}
