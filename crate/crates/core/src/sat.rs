//! SBP-SAT discretizations of `u_xx` with Dirichlet or Neumann conditions
//! imposed weakly at each end.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::borrowing_capacity;
use crate::error::{Error, Result};
use crate::export::to_json_string;
use crate::numkernel::{sym_eigenvalues, DenseMatrix, SpectrumReport};
use crate::operators::{OperatorJson, SbpSecondDerivative};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Dirichlet,
    Neumann,
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(BoundaryKind::Dirichlet),
            "neumann" | "n" => Ok(BoundaryKind::Neumann),
            other => Err(Error::InvalidArgument(format!("unknown boundary condition {other:?}"))),
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Neumann => "neumann",
        })
    }
}

/// A boundary-condition-modified discretization matrix `D` with its
/// symmetric form `H·D`.
#[derive(Debug, Clone)]
pub struct SatDiscretization {
    op: SbpSecondDerivative,
    bc_left: BoundaryKind,
    bc_right: BoundaryKind,
    phi: f64,
    gamma: Option<f64>,
    mu: Option<f64>,
    d: DenseMatrix,
    symmetric_form: DenseMatrix,
}

/// Neumann penalty signs σ_L = +1, σ_R = −1.
pub const SIGMA_LEFT: f64 = 1.0;
pub const SIGMA_RIGHT: f64 = -1.0;

impl SatDiscretization {
    pub fn op(&self) -> &SbpSecondDerivative {
        &self.op
    }

    pub fn bc_left(&self) -> BoundaryKind {
        self.bc_left
    }

    pub fn bc_right(&self) -> BoundaryKind {
        self.bc_right
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Borrowing capacity, present when a side is Dirichlet.
    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    /// Dirichlet penalty `μ = −φ/(hγ)`.
    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    pub fn d(&self) -> &DenseMatrix {
        &self.d
    }

    /// `H·D`, symmetric by construction.
    pub fn symmetric_form(&self) -> &DenseMatrix {
        &self.symmetric_form
    }

    pub fn is_pure_neumann(&self) -> bool {
        self.bc_left == BoundaryKind::Neumann && self.bc_right == BoundaryKind::Neumann
    }

    pub fn has_dirichlet(&self) -> bool {
        self.bc_left == BoundaryKind::Dirichlet || self.bc_right == BoundaryKind::Dirichlet
    }

    /// `H^{-1/2} (H D) H^{-1/2}`: symmetric and similar to `D`.
    pub fn similar_symmetric(&self) -> DenseMatrix {
        let s: Vec<f64> = self.op.h_diag().iter().map(|w| 1.0 / w.sqrt()).collect();
        self.symmetric_form.scale_rows(&s).scale_cols(&s).symmetrized()
    }

    /// Eigenvalues of `D` (all real and non-positive for stable settings).
    pub fn spectrum(&self) -> Result<SpectrumReport> {
        sym_eigenvalues(&self.similar_symmetric())
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self.spectrum()?.spectral_radius)
    }

    /// Boundary vectors `(b_L, b_R)` such that the forcing is
    /// `f + b_L g_left + b_R g_right`.
    pub fn boundary_vectors(&self) -> (Vec<f64>, Vec<f64>) {
        let grid = self.op.grid();
        let len = grid.len();
        let hinv = self.op.h_inv_diag();
        let mut bl = vec![0.0; len];
        let mut br = vec![0.0; len];
        match self.bc_left {
            BoundaryKind::Dirichlet => {
                let mu = self.mu.expect("Dirichlet side has mu");
                // −H⁻¹(μ e_L − d_L)
                for i in 0..len {
                    let e = if i == 0 { mu } else { 0.0 };
                    bl[i] = -hinv[i] * (e - self.op.d_left()[i]);
                }
            }
            BoundaryKind::Neumann => bl[0] = -SIGMA_LEFT * hinv[0],
        }
        match self.bc_right {
            BoundaryKind::Dirichlet => {
                let mu = self.mu.expect("Dirichlet side has mu");
                // −H⁻¹(μ e_R + d_R)
                for i in 0..len {
                    let e = if i == len - 1 { mu } else { 0.0 };
                    br[i] = -hinv[i] * (e + self.op.d_right()[i]);
                }
            }
            BoundaryKind::Neumann => br[len - 1] = -SIGMA_RIGHT * hinv[len - 1],
        }
        (bl, br)
    }

    /// JSON: the operator fields plus `{bc_left, bc_right, phi, gamma, mu}`.
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct DiscretizationJson<'a> {
            #[serde(flatten)]
            operator: OperatorJson,
            bc_left: BoundaryKind,
            bc_right: BoundaryKind,
            phi: f64,
            gamma: Option<f64>,
            mu: Option<f64>,
            #[serde(rename = "D")]
            d: &'a [Vec<f64>],
        }
        let d = self.d.to_rows();
        to_json_string(&DiscretizationJson {
            operator: OperatorJson::from(&self.op),
            bc_left: self.bc_left,
            bc_right: self.bc_right,
            phi: self.phi,
            gamma: self.gamma,
            mu: self.mu,
            d: &d,
        })
    }
}

/// Builds `D` with SAT terms per side:
/// Dirichlet `H⁻¹(μ e − (∓d)) eᵀ`, Neumann `±H⁻¹ e dᵀ` (cancelling the
/// boundary term of `D2`). `phi` must be ≥ 1 when a side is Dirichlet.
pub fn build_discretization(
    op: &SbpSecondDerivative,
    bc_left: BoundaryKind,
    bc_right: BoundaryKind,
    phi: f64,
) -> Result<SatDiscretization> {
    let dirichlet = bc_left == BoundaryKind::Dirichlet || bc_right == BoundaryKind::Dirichlet;
    let (gamma, mu) = if dirichlet {
        if !(phi >= 1.0) || !phi.is_finite() {
            return Err(Error::InvalidPhi(phi));
        }
        let gamma = borrowing_capacity(op)
            .map_err(|e| match e {
                Error::SingularInterior { .. } => Error::BorrowingUnavailable,
                other => other,
            })?
            .gamma;
        (Some(gamma), Some(-phi / (op.grid().h() * gamma)))
    } else {
        (None, None)
    };

    let grid = op.grid();
    let el = grid.e_left();
    let er = grid.e_right();
    let dl = op.d_left();
    let dr = op.d_right();
    // H·D assembled from symmetric pieces so it is symmetric to the bit.
    let mut hd = op.a().scale(-1.0);
    if bc_left == BoundaryKind::Dirichlet {
        let mu = mu.expect("set above");
        hd.add_outer(mu, &el, &el);
        hd.add_outer(-1.0, &el, dl);
        hd.add_outer(-1.0, dl, &el);
    }
    if bc_right == BoundaryKind::Dirichlet {
        let mu = mu.expect("set above");
        hd.add_outer(mu, &er, &er);
        hd.add_outer(1.0, &er, dr);
        hd.add_outer(1.0, dr, &er);
    }
    let d = hd.scale_rows(&op.h_inv_diag());
    Ok(SatDiscretization {
        op: op.clone(),
        bc_left,
        bc_right,
        phi,
        gamma,
        mu,
        d,
        symmetric_form: hd,
    })
}

/// Forcing `f_D` / `f_N` / mixed: `f` plus the boundary-data SAT terms.
pub fn assemble_forcing(disc: &SatDiscretization, f_values: &[f64], g_left: f64, g_right: f64) -> Result<Vec<f64>> {
    let len = disc.op.grid().len();
    if f_values.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "forcing has length {}, expected {len}",
            f_values.len()
        )));
    }
    let (bl, br) = disc.boundary_vectors();
    Ok(f_values
        .iter()
        .zip(bl.iter().zip(&br))
        .map(|(f, (l, r))| f + l * g_left + r * g_right)
        .collect())
}
