use serde::Serialize;

use crate::analysis::compatibility::min_alpha_for_t;
use crate::error::{Error, Result};

use super::d1::{build_d1, FirstDerivativeFamily, SbpFirstDerivative};
use super::{Grid, InteriorOrder};

/// β of the most accurate member (row 5 exact on x⁴).
pub const BETA_ACCURACY: f64 = 342523.0 / 518400.0;
/// β of the member with five nonzeros in its first row.
pub const BETA_MIN_BANDWIDTH: f64 = 89387.0 / 129600.0;
/// β of the member with optimal L2 spectrum; used to cross-check the map.
pub const BETA_SPECTRAL: f64 = 331.0 / 472.0;
/// Smallest compatible α for [`BETA_SPECTRAL`].
pub const BETA_SPECTRAL_MIN_ALPHA: f64 = 481.6401641339156;

const CROSS_CHECK_TOL: f64 = 1e-4;

/// Affine map `β = slope·t + intercept` between the raw nullspace
/// coordinate `t` of the order-6 first-derivative family and β.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaMap {
    pub slope: f64,
    pub intercept: f64,
    /// `t` at which row 5 of `D1` is exact on x⁴.
    pub t_accuracy: f64,
    /// `t` at which the vanishing first-row entry is zero.
    pub t_min_bandwidth: f64,
    /// Column of the first-row entry that vanishes at `t_min_bandwidth`.
    pub vanishing_column: usize,
    /// Smallest compatible α at [`BETA_SPECTRAL`] under this map.
    pub spectral_min_alpha: f64,
}

impl BetaMap {
    fn through(t_acc: f64, t_bw: f64, column: usize) -> Self {
        let slope = (BETA_MIN_BANDWIDTH - BETA_ACCURACY) / (t_bw - t_acc);
        BetaMap {
            slope,
            intercept: BETA_ACCURACY - slope * t_acc,
            t_accuracy: t_acc,
            t_min_bandwidth: t_bw,
            vanishing_column: column,
            spectral_min_alpha: f64::NAN,
        }
    }

    pub fn beta_of_t(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }

    pub fn t_of_beta(&self, beta: f64) -> f64 {
        (beta - self.intercept) / self.slope
    }

    /// Order-6 first-derivative operator for a given β.
    pub fn build_d1(&self, grid: &Grid, beta: f64) -> Result<SbpFirstDerivative> {
        Ok(build_d1(grid, InteriorOrder::Sixth, Some(self.t_of_beta(beta)))?.with_beta(beta))
    }
}

/// `t` making row 5 of `D1(t)` exact on x⁴. The residual is affine in `t`.
fn accuracy_anchor(grid: &Grid) -> Result<f64> {
    let x3 = grid.monomial(3);
    let x4 = grid.monomial(4);
    let residual = |t: f64| -> Result<f64> {
        let op = build_d1(grid, InteriorOrder::Sixth, Some(t))?;
        Ok(crate::numkernel::dot(op.d1().row(5), &x4) - 4.0 * x3[5])
    };
    let r0 = residual(0.0)?;
    let r1 = residual(1.0)? - r0;
    Ok(-r0 / r1)
}

/// Calibrates the affine map between `t` and β.
///
/// Anchor A maps the most accurate member to [`BETA_ACCURACY`]; anchor B
/// maps the member with a vanishing first-row entry to
/// [`BETA_MIN_BANDWIDTH`]. Every first-row entry crosses zero somewhere on
/// the line, so each candidate is checked against the published minimum
/// compatible α at [`BETA_SPECTRAL`] and exactly one must agree.
pub fn calibrate_beta(grid: &Grid) -> Result<BetaMap> {
    InteriorOrder::Sixth.check_grid(grid.n())?;
    let family = FirstDerivativeFamily::get(InteriorOrder::Sixth);
    let t_acc = accuracy_anchor(grid)?;

    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for column in 1..family.corner_size() {
        let (p, v) = family.entry_line(0, column);
        if v.abs() < 1e-12 {
            continue;
        }
        let t_bw = -p / v;
        if (t_bw - t_acc).abs() < 1e-12 {
            continue;
        }
        let mut map = BetaMap::through(t_acc, t_bw, column);
        let t_check = map.t_of_beta(BETA_SPECTRAL);
        match min_alpha_for_t(grid, t_check) {
            Ok(alpha) => {
                map.spectral_min_alpha = alpha;
                if (alpha - BETA_SPECTRAL_MIN_ALPHA).abs() <= CROSS_CHECK_TOL {
                    accepted.push(map);
                } else {
                    rejected.push(format!("column {column}: threshold {alpha:.10}"));
                }
            }
            Err(Error::NoCrossing { .. }) => rejected.push(format!("column {column}: no crossing")),
            Err(e) => return Err(e),
        }
    }
    match accepted.len() {
        1 => Ok(accepted.pop().expect("one candidate")),
        0 => Err(Error::CalibrationAmbiguous(format!(
            "no candidate reproduces the reference threshold ({})",
            rejected.join("; ")
        ))),
        k => Err(Error::CalibrationAmbiguous(format!(
            "{k} candidates reproduce the reference threshold"
        ))),
    }
}
