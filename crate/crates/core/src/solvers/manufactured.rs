use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Which PDE a forcing function is generated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    /// `−u_xx = f`.
    Poisson,
    /// `u_t = u_xx + f`.
    Heat,
    /// `u_tt = u_xx + f`.
    Wave,
}

/// Exact solutions used to generate forcing and boundary data.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ManufacturedSolution {
    /// Time-independent polynomial `Σ cₖ xᵏ`.
    Polynomial { coefficients: Vec<f64> },
    /// Heat solution with zero forcing:
    /// `(sin(cx + 2c²t) e^{c(x−1)} + sin(−cx + 2c²t) e^{−c(x−1)}) / (e^c + e^{−c})`.
    HeatC { c: f64 },
    /// `cos(2πx + 1) cos(2πt + 2)`, which has zero wave forcing.
    WaveTrig,
}

impl ManufacturedSolution {
    /// `u = x⁵`.
    pub fn poly5() -> Self {
        Self::monomial(5)
    }

    /// `u = x²`.
    pub fn quad() -> Self {
        Self::monomial(2)
    }

    pub fn monomial(k: usize) -> Self {
        let mut coefficients = vec![0.0; k + 1];
        coefficients[k] = 1.0;
        ManufacturedSolution::Polynomial { coefficients }
    }

    pub fn heat_c(c: f64) -> Self {
        ManufacturedSolution::HeatC { c }
    }

    pub fn wave_trig() -> Self {
        ManufacturedSolution::WaveTrig
    }

    /// Parses `poly5`, `quad`, `heat_c` (c = 3), `heat_c:<c>` or `wave_trig`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "poly5" => Ok(Self::poly5()),
            "quad" => Ok(Self::quad()),
            "heat_c" => Ok(Self::heat_c(3.0)),
            "wave_trig" => Ok(Self::wave_trig()),
            other => {
                if let Some(c) = other.strip_prefix("heat_c:") {
                    let c: f64 = c
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad heat_c parameter {c:?}")))?;
                    return Ok(Self::heat_c(c));
                }
                Err(Error::InvalidArgument(format!(
                    "unknown manufactured solution {other:?} (poly5, quad, heat_c, wave_trig)"
                )))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            ManufacturedSolution::Polynomial { coefficients } => {
                let nonzero: Vec<usize> = (0..coefficients.len()).filter(|&k| coefficients[k] != 0.0).collect();
                match nonzero.as_slice() {
                    [5] if coefficients[5] == 1.0 => "poly5".into(),
                    [2] if coefficients[2] == 1.0 => "quad".into(),
                    _ => "polynomial".into(),
                }
            }
            ManufacturedSolution::HeatC { .. } => "heat_c".into(),
            ManufacturedSolution::WaveTrig => "wave_trig".into(),
        }
    }

    fn poly_derivative(coefficients: &[f64], x: f64, order: u32) -> f64 {
        coefficients
            .iter()
            .enumerate()
            .skip(order as usize)
            .map(|(k, c)| {
                let falling: f64 = (0..order).map(|j| (k as u32 - j) as f64).product();
                c * falling * x.powi(k as i32 - order as i32)
            })
            .sum()
    }

    /// Space derivative of order `dx` and time derivative of order `dt`.
    fn derivative(&self, x: f64, t: f64, dx: u32, dt: u32) -> f64 {
        match self {
            ManufacturedSolution::Polynomial { coefficients } => {
                if dt > 0 {
                    0.0
                } else {
                    Self::poly_derivative(coefficients, x, dx)
                }
            }
            ManufacturedSolution::HeatC { c } => {
                // u = Im[e^{(1+i)c(x−1)} e^{i2c²t}] + Im[e^{−(1+i)c(x−1)} e^{i2c²t}], scaled.
                // ∂x brings (1+i)c or −(1+i)c, ∂t brings 2ic².
                let c = *c;
                let denom = c.exp() + (-c).exp();
                let term = |sign: f64| -> f64 {
                    let a = sign * c; // real part of the space factor
                    let b = sign * c; // imaginary part
                    let (mut re, mut im) = (1.0, 0.0);
                    for _ in 0..dx {
                        let (r, i) = (re * a - im * b, re * b + im * a);
                        re = r;
                        im = i;
                    }
                    for _ in 0..dt {
                        let w = 2.0 * c * c;
                        let (r, i) = (-im * w, re * w);
                        re = r;
                        im = i;
                    }
                    let phase = sign * c * x + 2.0 * c * c * t;
                    let amp = (sign * c * (x - 1.0)).exp();
                    // Im[(re + i im) e^{i phase}]
                    amp * (re * phase.sin() + im * phase.cos())
                };
                (term(1.0) + term(-1.0)) / denom
            }
            ManufacturedSolution::WaveTrig => {
                let tp = 2.0 * PI;
                let cycle = |arg: f64, k: u32| -> f64 {
                    // k-th derivative of cos, without the chain-rule factor
                    match k % 4 {
                        0 => arg.cos(),
                        1 => -arg.sin(),
                        2 => -arg.cos(),
                        _ => arg.sin(),
                    }
                };
                tp.powi(dx as i32 + dt as i32) * cycle(tp * x + 1.0, dx) * cycle(tp * t + 2.0, dt)
            }
        }
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        self.derivative(x, t, 0, 0)
    }

    pub fn u_x(&self, x: f64, t: f64) -> f64 {
        self.derivative(x, t, 1, 0)
    }

    pub fn u_xx(&self, x: f64, t: f64) -> f64 {
        self.derivative(x, t, 2, 0)
    }

    pub fn u_t(&self, x: f64, t: f64) -> f64 {
        self.derivative(x, t, 0, 1)
    }

    pub fn u_tt(&self, x: f64, t: f64) -> f64 {
        self.derivative(x, t, 0, 2)
    }

    /// Forcing making `u` an exact solution of `equation`.
    pub fn forcing(&self, equation: Equation, x: f64, t: f64) -> f64 {
        match equation {
            Equation::Poisson => -self.u_xx(x, t),
            Equation::Heat => self.u_t(x, t) - self.u_xx(x, t),
            Equation::Wave => self.u_tt(x, t) - self.u_xx(x, t),
        }
    }
}

impl FromStr for ManufacturedSolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_name(s)
    }
}
