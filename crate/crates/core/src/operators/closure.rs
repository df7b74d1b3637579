//! Linear systems that determine the symmetric boundary corner of `A` from
//! the moment conditions of a narrow-stencil second-derivative operator.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numkernel::{min_norm_least_squares, DenseMatrix};

use super::sixth::{self, A_INTERIOR_HALF};
use super::Grid;

const RANK_TOL: f64 = 1e-10;
const RESIDUAL_WARN: f64 = 1e-10;
const RESIDUAL_FAIL: f64 = 1e-8;

/// `M c = rhs` for the upper-triangular unknowns `c_ij` (i ≤ j) of a
/// symmetric corner, listed row by row: c00, c01, …, c0m, c11, …
#[derive(Debug, Clone)]
pub struct ClosureSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub unknowns: Vec<(usize, usize)>,
    pub corner: usize,
}

impl ClosureSystem {
    /// Builds the shifted-moment conditions `Σⱼ c_ij (j−i)^k = …` for rows
    /// `0..corner` and every `k` in `moments`.
    ///
    /// `half_stencil[d]` is the interior value of `h·A` at offset `d`. Columns
    /// beyond the corner carry the interior stencil and are moved to the
    /// right-hand side. The `k = 2` condition needs the norm weights
    /// `eta[i] = H[i][i]/h`.
    pub fn second_derivative(
        half_stencil: &[f64],
        corner: usize,
        moments: &[u32],
        eta: Option<&[f64]>,
    ) -> Result<Self> {
        if moments.contains(&2) && eta.map_or(true, |e| e.len() < corner) {
            return Err(Error::InvalidArgument(
                "the k = 2 moment needs norm weights for every corner row".into(),
            ));
        }
        let unknowns: Vec<(usize, usize)> = (0..corner)
            .flat_map(|i| (i..corner).map(move |j| (i, j)))
            .collect();
        let q = half_stencil.len() - 1;
        let shifted = |d: i64, k: u32| (d as f64).powi(k as i32);

        let mut rows = Vec::with_capacity(corner * moments.len());
        let mut rhs = Vec::with_capacity(corner * moments.len());
        for i in 0..corner {
            for &k in moments {
                let row: Vec<f64> = unknowns
                    .iter()
                    .map(|&(a, c)| {
                        if a == i {
                            shifted(c as i64 - i as i64, k)
                        } else if c == i {
                            shifted(a as i64 - i as i64, k)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let mut b = 0.0;
                for j in corner..=(i + q) {
                    b -= half_stencil[j - i] * shifted((j - i) as i64, k);
                }
                if k == 1 && i == 0 {
                    b -= 1.0;
                }
                if k == 2 {
                    b -= 2.0 * eta.expect("checked above")[i];
                }
                rows.push(row);
                rhs.push(b);
            }
        }
        Ok(ClosureSystem {
            matrix: DenseMatrix::from_rows(&rows)?,
            rhs,
            unknowns,
            corner,
        })
    }

    /// The 24×21 system of the sixth-order closure: moments 0, 1, 3, 4 on
    /// rows 0..5 in units of `1/180`.
    pub fn sixth_order() -> Self {
        let half: Vec<f64> = A_INTERIOR_HALF.iter().map(|v| v / sixth::A_SCALE).collect();
        Self::second_derivative(&half, 6, &[0, 1, 3, 4], None).expect("valid sixth-order system")
    }

    /// Index of unknown `(i, j)` (either order).
    pub fn unknown_index(&self, i: usize, j: usize) -> usize {
        let (a, c) = if i <= j { (i, j) } else { (j, i) };
        self.unknowns
            .iter()
            .position(|&u| u == (a, c))
            .expect("unknown inside the corner")
    }

    /// Symmetric corner matrix from an unknown vector.
    pub fn unpack(&self, values: &[f64]) -> DenseMatrix {
        let mut c = DenseMatrix::zeros(self.corner, self.corner);
        for (&(a, b), &v) in self.unknowns.iter().zip(values) {
            c[(a, b)] = v;
            c[(b, a)] = v;
        }
        c
    }

    pub fn solve(&self) -> Result<SolvedClosure> {
        let ls = min_norm_least_squares(&self.matrix, &self.rhs, RANK_TOL)?;
        if ls.residual > RESIDUAL_FAIL {
            return Err(Error::InconsistentSystem {
                residual: ls.residual,
            });
        }
        debug_assert!(ls.residual <= RESIDUAL_WARN, "closure residual {}", ls.residual);
        Ok(SolvedClosure {
            particular: ls.solution,
            nullspace: ls.nullspace,
            rank: ls.rank,
            residual: ls.residual,
        })
    }
}

/// Minimum-norm solution of a [`ClosureSystem`] plus its nullspace.
#[derive(Debug, Clone)]
pub struct SolvedClosure {
    pub particular: Vec<f64>,
    pub nullspace: Vec<Vec<f64>>,
    pub rank: usize,
    pub residual: f64,
}

/// Result of solving the sixth-order corner system.
///
/// `corner` and `nullspace_direction` are in the bracket scale of the
/// closure, i.e. the corner of `A` is `(corner + α·k kᵀ) / (180h)`.
#[derive(Debug, Clone)]
pub struct ClosureSolution {
    /// Particular solution shifted along the nullspace so that entry (5,5)
    /// vanishes, which places it at α = 0.
    pub corner: DenseMatrix,
    pub nullspace_dim: usize,
    /// Unit Frobenius norm, sign chosen so entry (0,0) is positive.
    pub nullspace_direction: DenseMatrix,
    pub system_rank: usize,
    pub residual: f64,
}

impl ClosureSolution {
    /// `corner + α·k kᵀ`, with `k kᵀ` recovered from the unit direction
    /// through its (5,5) entry (which is 1 for `k kᵀ`).
    pub fn corner_at(&self, alpha: f64) -> DenseMatrix {
        let d = &self.nullspace_direction;
        let scale = alpha / d[(5, 5)];
        self.corner.add(&d.scale(scale))
    }

    /// Corner block of `A` on a grid: `corner_at(α) / (180h)`.
    pub fn a_corner(&self, alpha: f64, grid: &Grid) -> DenseMatrix {
        self.corner_at(alpha).scale(grid.n() as f64 / sixth::A_SCALE)
    }
}

/// Builds and solves the 24-equation, 21-unknown sixth-order corner system.
pub fn solve_closure_system(grid: &Grid) -> Result<ClosureSolution> {
    super::InteriorOrder::Sixth.check_grid(grid.n())?;
    let system = ClosureSystem::sixth_order();
    let solved = system.solve()?;
    if solved.nullspace.len() != 1 {
        return Err(Error::InconsistentSystem {
            residual: solved.residual,
        });
    }
    let null = &solved.nullspace[0];
    let i55 = system.unknown_index(5, 5);
    let shift = solved.particular[i55] / null[i55];
    let at_zero: Vec<f64> = solved
        .particular
        .iter()
        .zip(null)
        .map(|(p, v)| p - shift * v)
        .collect();
    let corner = system.unpack(&at_zero).scale(sixth::A_SCALE);

    let mut direction = system.unpack(null);
    let norm = direction.norm_fro();
    let sign = if direction[(0, 0)] < 0.0 { -1.0 } else { 1.0 };
    direction = direction.scale(sign / norm);

    Ok(ClosureSolution {
        corner,
        nullspace_dim: solved.nullspace.len(),
        nullspace_direction: direction,
        system_rank: solved.rank,
        residual: solved.residual,
    })
}

/// Norm weights `H[i][i]/h` implied by a corner of `h·A` through the k = 2
/// moment: `ηᵢ = −½ Σⱼ c_ij (j−i)²`, interior stencil included.
pub fn implied_norm_weights(corner: &DenseMatrix, half_stencil: &[f64]) -> Vec<f64> {
    let m = corner.rows();
    let q = half_stencil.len() - 1;
    (0..m)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..m {
                let d = j as f64 - i as f64;
                s += corner[(i, j)] * d * d;
            }
            for j in m..=(i + q) {
                let d = (j - i) as f64;
                s += half_stencil[j - i] * d * d;
            }
            -0.5 * s
        })
        .collect()
}

/// Norm weights (units of h) of the fourth-order diagonal norm.
pub const FOURTH_NORM: [f64; 4] = [17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0];

/// Interior half stencil of `h·A` for order 4.
pub const FOURTH_A_HALF: [f64; 3] = [30.0 / 12.0, -16.0 / 12.0, 1.0 / 12.0];

/// Interior half stencil of `h·A` for order 2.
pub const SECOND_A_HALF: [f64; 2] = [2.0, -1.0];

/// Fourth-order corner of `h·A`: 4 closure rows, moments 0..3, unique.
pub fn fourth_order_corner() -> &'static DenseMatrix {
    static CORNER: OnceLock<DenseMatrix> = OnceLock::new();
    CORNER.get_or_init(|| {
        let sys = ClosureSystem::second_derivative(&FOURTH_A_HALF, 4, &[0, 1, 2, 3], Some(&FOURTH_NORM))
            .expect("valid fourth-order system");
        let sol = sys.solve().expect("fourth-order closure is consistent");
        assert!(sol.nullspace.is_empty(), "fourth-order closure must be unique");
        sys.unpack(&sol.particular)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixth_order_rank_and_nullspace() {
        let sol = solve_closure_system(&Grid::new(24).unwrap()).unwrap();
        assert_eq!(sol.system_rank, 20);
        assert_eq!(sol.nullspace_dim, 1);
        assert!(sol.residual < 1e-10);
        let k = sixth::FREE_DIRECTION;
        let kk = DenseMatrix::from_fn(6, 6, |i, j| (k[i] * k[j]) as f64 / 252.0);
        assert!(sol.nullspace_direction.sub(&kk).max_abs() < 1e-12);
    }

    #[test]
    fn sixth_order_corner_at_zero_is_m0() {
        let sol = solve_closure_system(&Grid::new(24).unwrap()).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let exact = sixth::corner_entry(i, j, 0.0);
                let got = sol.corner[(i, j)];
                assert!(
                    (got - exact).abs() <= 1e-9 * exact.abs().max(1.0),
                    "({i},{j}): {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn second_order_generic_matches_standard() {
        let sys = ClosureSystem::second_derivative(&SECOND_A_HALF, 1, &[0, 1, 2], Some(&[0.5])).unwrap();
        let sol = sys.solve().unwrap();
        assert!(sol.nullspace.is_empty());
        assert!((sol.particular[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fourth_order_corner_is_classical() {
        let c = fourth_order_corner();
        let expected = [
            [54.0, -59.0, 4.0, 1.0],
            [-59.0, 118.0, -59.0, 0.0],
            [4.0, -59.0, 110.0, -59.0],
            [1.0, 0.0, -59.0, 118.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((c[(i, j)] - expected[i][j] / 48.0).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn corner_implies_published_norm_for_any_alpha() {
        let half: Vec<f64> = A_INTERIOR_HALF.iter().map(|v| v / sixth::A_SCALE).collect();
        for alpha in [0.0, 481.5, 490.0] {
            let c = DenseMatrix::from_fn(6, 6, |i, j| sixth::corner_entry(i, j, alpha) / sixth::A_SCALE);
            let eta = implied_norm_weights(&c, &half);
            for (e, w) in eta.iter().zip(sixth::NORM_BOUNDARY) {
                assert!((e - w as f64 / 43200.0).abs() < 1e-12, "alpha {alpha}: {e}");
            }
        }
    }
}
