use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numkernel::{min_norm_least_squares, DenseMatrix};

use super::closure::FOURTH_NORM;
use super::d2::norm_weights;
use super::sixth;
use super::{Grid, InteriorOrder};

const RANK_TOL: f64 = 1e-10;

/// Diagonal-norm SBP first-derivative operator `D1 = H⁻¹Q` with
/// `Q + Qᵀ = −e_L e_Lᵀ + e_R e_Rᵀ`.
#[derive(Debug, Clone)]
pub struct SbpFirstDerivative {
    grid: Grid,
    order: InteriorOrder,
    h_diag: Vec<f64>,
    q: DenseMatrix,
    d1: DenseMatrix,
    free_param_t: Option<f64>,
    beta: Option<f64>,
}

impl SbpFirstDerivative {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn order(&self) -> InteriorOrder {
        self.order
    }

    pub fn h_diag(&self) -> &[f64] {
        &self.h_diag
    }

    pub fn q(&self) -> &DenseMatrix {
        &self.q
    }

    pub fn d1(&self) -> &DenseMatrix {
        &self.d1
    }

    /// Raw nullspace coordinate of the order-6 family.
    pub fn free_param_t(&self) -> Option<f64> {
        self.free_param_t
    }

    /// Calibrated β, when the operator was built through a [`super::BetaMap`].
    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub(crate) fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }
}

/// The boundary corner of `Q` for one interior order, solved once from the
/// accuracy conditions on rows `0..corner`. For order 6 the solution is a
/// line `Q₀ + t·N` in the strict upper triangle.
#[derive(Debug, Clone)]
pub struct FirstDerivativeFamily {
    order: InteriorOrder,
    corner: usize,
    unknowns: Vec<(usize, usize)>,
    particular: Vec<f64>,
    direction: Option<Vec<f64>>,
    rank: usize,
    equations: usize,
    residual: f64,
}

fn interior_q_half(order: InteriorOrder) -> Vec<f64> {
    match order {
        InteriorOrder::Second => vec![0.0, 0.5],
        InteriorOrder::Fourth => vec![0.0, 8.0 / 12.0, -1.0 / 12.0],
        InteriorOrder::Sixth => sixth::Q_INTERIOR_HALF
            .iter()
            .map(|v| v / sixth::Q_SCALE)
            .collect(),
    }
}

fn boundary_eta(order: InteriorOrder) -> Vec<f64> {
    match order {
        InteriorOrder::Second => vec![0.5],
        InteriorOrder::Fourth => FOURTH_NORM.to_vec(),
        InteriorOrder::Sixth => sixth::NORM_BOUNDARY
            .iter()
            .map(|&w| w as f64 / sixth::NORM_DENOMINATOR as f64)
            .collect(),
    }
}

impl FirstDerivativeFamily {
    pub fn new(order: InteriorOrder) -> Result<Self> {
        let m = order.closure_rows();
        let p = order.boundary_order() as i32;
        let half = interior_q_half(order);
        let width = half.len() - 1;
        let eta = boundary_eta(order);
        let unknowns: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect();

        // Q[i][j] for columns outside the corner, fixed by antisymmetry
        // against the interior rows.
        let fixed = |i: usize, j: usize| -> f64 {
            if i == 0 && j == 0 {
                -0.5
            } else if j >= m && j - i <= width {
                half[j - i]
            } else {
                0.0
            }
        };

        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..m {
            for k in 0..=p {
                let pw = |j: usize| (j as f64).powi(k);
                let row: Vec<f64> = unknowns
                    .iter()
                    .map(|&(a, c)| {
                        if a == i {
                            pw(c)
                        } else if c == i {
                            -pw(a)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let target = if k == 0 {
                    0.0
                } else {
                    eta[i] * k as f64 * (i as f64).powi(k - 1)
                };
                let known: f64 = (0..=i + width).map(|j| {
                    if j < m && !(i == 0 && j == 0) {
                        0.0
                    } else {
                        fixed(i, j) * pw(j)
                    }
                }).sum();
                rows.push(row);
                rhs.push(target - known);
            }
        }
        let equations = rows.len();

        if unknowns.is_empty() {
            let residual = rhs.iter().fold(0.0, |a: f64, b| a.max(b.abs()));
            if residual > 1e-12 {
                return Err(Error::InconsistentSystem { residual });
            }
            return Ok(FirstDerivativeFamily {
                order,
                corner: m,
                unknowns,
                particular: Vec::new(),
                direction: None,
                rank: 0,
                equations,
                residual,
            });
        }

        let matrix = DenseMatrix::from_rows(&rows)?;
        let ls = min_norm_least_squares(&matrix, &rhs, RANK_TOL)?;
        if ls.residual > 1e-10 {
            return Err(Error::InconsistentSystem {
                residual: ls.residual,
            });
        }
        let direction = match ls.nullspace.len() {
            0 => None,
            1 => {
                let mut v = ls.nullspace[0].clone();
                let i01 = unknowns.iter().position(|&u| u == (0, 1)).expect("(0,1) is unknown");
                if v[i01] < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                Some(v)
            }
            d => {
                return Err(Error::InvalidArgument(format!(
                    "first-derivative closure of order {order} has a {d}-dimensional nullspace"
                )))
            }
        };
        Ok(FirstDerivativeFamily {
            order,
            corner: m,
            unknowns,
            particular: ls.solution,
            direction,
            rank: ls.rank,
            equations,
            residual: ls.residual,
        })
    }

    /// Cached family for an interior order.
    pub fn get(order: InteriorOrder) -> &'static FirstDerivativeFamily {
        static CACHE: [OnceLock<FirstDerivativeFamily>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let slot = match order {
            InteriorOrder::Second => &CACHE[0],
            InteriorOrder::Fourth => &CACHE[1],
            InteriorOrder::Sixth => &CACHE[2],
        };
        slot.get_or_init(|| FirstDerivativeFamily::new(order).expect("standard first-derivative closure"))
    }

    pub fn order(&self) -> InteriorOrder {
        self.order
    }

    pub fn corner_size(&self) -> usize {
        self.corner
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns.len()
    }

    pub fn equation_count(&self) -> usize {
        self.equations
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn has_free_parameter(&self) -> bool {
        self.direction.is_some()
    }

    /// `(value at t = 0, slope in t)` of corner entry `Q[i][j]`, `i < j`.
    pub fn entry_line(&self, i: usize, j: usize) -> (f64, f64) {
        match self.unknowns.iter().position(|&u| u == (i, j)) {
            Some(u) => (
                self.particular[u],
                self.direction.as_ref().map_or(0.0, |d| d[u]),
            ),
            None => (0.0, 0.0),
        }
    }

    /// The `corner × corner` block of `Q` at parameter `t`.
    pub fn corner(&self, t: f64) -> DenseMatrix {
        let mut c = DenseMatrix::zeros(self.corner, self.corner);
        c[(0, 0)] = -0.5;
        for (u, &(a, b)) in self.unknowns.iter().enumerate() {
            let v = self.particular[u] + t * self.direction.as_ref().map_or(0.0, |d| d[u]);
            c[(a, b)] = v;
            c[(b, a)] = -v;
        }
        c
    }
}

/// Builds the SBP first-derivative operator. `t` is required for order 6
/// (the coordinate along the unit nullspace direction of the closure).
pub fn build_d1(grid: &Grid, order: InteriorOrder, t: Option<f64>) -> Result<SbpFirstDerivative> {
    order.check_grid(grid.n())?;
    let family = FirstDerivativeFamily::get(order);
    let t = if family.has_free_parameter() {
        let t = t.ok_or(Error::MissingParameter)?;
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!("t must be finite, got {t}")));
        }
        Some(t)
    } else {
        None
    };

    let len = grid.len();
    let half = interior_q_half(order);
    let width = half.len() - 1;
    let mut q = DenseMatrix::zeros(len, len);
    for i in 0..len {
        for k in 1..=width {
            if i + k < len {
                q[(i, i + k)] = half[k];
                q[(i + k, i)] = -half[k];
            }
        }
    }
    let corner = family.corner(t.unwrap_or(0.0));
    let m = corner.rows();
    for i in 0..m {
        for j in 0..m {
            q[(i, j)] = corner[(i, j)];
            q[(len - 1 - i, len - 1 - j)] = -corner[(i, j)];
        }
    }
    let h_diag = norm_weights(order, grid);
    let inv: Vec<f64> = h_diag.iter().map(|w| 1.0 / w).collect();
    let d1 = q.scale_rows(&inv);
    Ok(SbpFirstDerivative {
        grid: grid.clone(),
        order,
        h_diag,
        q,
        d1,
        free_param_t: t,
        beta: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_first_row() {
        let g = Grid::new(4).unwrap();
        let op = build_d1(&g, InteriorOrder::Second, None).unwrap();
        let row: Vec<f64> = op.d1().row(0).iter().map(|v| v * g.h()).collect();
        assert_eq!(row, vec![-1.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn sixth_order_family_has_one_parameter() {
        let f = FirstDerivativeFamily::get(InteriorOrder::Sixth);
        assert_eq!(f.unknown_count(), 15);
        assert_eq!(f.equation_count(), 24);
        assert_eq!(f.rank(), 14);
        assert!(f.has_free_parameter());
    }

    #[test]
    fn fourth_order_closure_is_unique() {
        let f = FirstDerivativeFamily::get(InteriorOrder::Fourth);
        assert_eq!(f.unknown_count(), 6);
        assert_eq!(f.rank(), 6);
        assert!(!f.has_free_parameter());
        // classical first row: (-24/17, 59/34, -4/17, -3/34) / h
        let g = Grid::new(12).unwrap();
        let op = build_d1(&g, InteriorOrder::Fourth, None).unwrap();
        let expected = [-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0];
        for (j, e) in expected.iter().enumerate() {
            assert!((op.d1()[(0, j)] * g.h() - e).abs() < 1e-12, "entry {j}");
        }
    }

    #[test]
    fn sixth_order_needs_parameter() {
        let g = Grid::new(24).unwrap();
        assert_eq!(build_d1(&g, InteriorOrder::Sixth, None).unwrap_err(), Error::MissingParameter);
    }

    #[test]
    fn q_plus_qt_is_boundary_matrix() {
        let g = Grid::new(20).unwrap();
        for (order, t) in [
            (InteriorOrder::Second, None),
            (InteriorOrder::Fourth, None),
            (InteriorOrder::Sixth, Some(0.3)),
        ] {
            let op = build_d1(&g, order, t).unwrap();
            let s = op.q().add(&op.q().transpose());
            let mut b = DenseMatrix::zeros(21, 21);
            b[(0, 0)] = -1.0;
            b[(20, 20)] = 1.0;
            assert!(s.sub(&b).max_abs() < 1e-13, "order {order}");
        }
    }
}
