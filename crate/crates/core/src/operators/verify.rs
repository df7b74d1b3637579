use serde::Serialize;

use crate::numkernel::{dot, norm_inf, DenseMatrix};

use super::{SbpFirstDerivative, SbpSecondDerivative};

/// One invariant check: maximum residual against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Residuals of every invariant of an operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SbpReport {
    pub operator: String,
    pub checks: Vec<CheckResult>,
}

impl SbpReport {
    fn new(operator: String) -> Self {
        SbpReport {
            operator,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(CheckResult {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Operators whose defining identities can be checked numerically.
pub trait VerifySbp {
    fn verify(&self) -> SbpReport;
}

/// Evaluates every invariant of `op`. Never fails; failures are in the report.
pub fn verify_sbp<T: VerifySbp + ?Sized>(op: &T) -> SbpReport {
    op.verify()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn rows_residual(m: &DenseMatrix, w: &[f64], expected: &[f64], rows: std::ops::Range<usize>) -> f64 {
    rows.map(|i| (dot(m.row(i), w) - expected[i]).abs())
        .fold(0.0, f64::max)
}

fn derivative_of_monomial(nodes: &[f64], k: u32, order: u32) -> Vec<f64> {
    // d^order/dx^order x^k
    nodes
        .iter()
        .map(|&x| {
            if order > k {
                return 0.0;
            }
            let coef: f64 = (0..order).map(|j| (k - j) as f64).product();
            coef * x.powi((k - order) as i32)
        })
        .collect()
}

impl VerifySbp for SbpSecondDerivative {
    fn verify(&self) -> SbpReport {
        let grid = self.grid();
        let h = grid.h();
        let len = grid.len();
        let n = grid.n();
        let a = self.a();
        let ones = grid.ones();
        let x = grid.monomial(1);
        let mut report = SbpReport::new(format!(
            "D2 order {} n {}{}",
            self.order(),
            n,
            self.alpha().map_or(String::new(), |a| format!(" alpha {a}"))
        ));

        let hd2 = self.d2().scale_rows(self.h_diag());
        report.push("sbp_identity", hd2.sub(&self.h_times_d2()).max_abs(), 1e-12 / (h * h));

        let a_scale = a.norm_inf();
        report.push("a_symmetric", a.asymmetry(), 1e-14 * a_scale);
        let mirror = (0..len)
            .flat_map(|i| (0..len).map(move |j| (i, j)))
            .fold(0.0, |m: f64, (i, j)| m.max((a[(n - i, n - j)] - a[(i, j)]).abs()));
        report.push("a_mirror", mirror, 1e-14 * a_scale);
        let d_mirror = (0..len).fold(0.0, |m: f64, j| {
            m.max((self.d_right()[n - j] + self.d_left()[j]).abs())
        });
        report.push("d_mirror", d_mirror, 1e-14 / h);

        report.push("norm_positive", self.h_diag().iter().fold(0.0, |m: f64, w| m.max(-w)), 0.0);

        let mut er_minus_el = vec![0.0; len];
        er_minus_el[0] = -1.0;
        er_minus_el[n] = 1.0;
        report.push("a_times_ones", norm_inf(&a.matvec(&ones)), 1e-11 / h);
        report.push("a_times_x", max_abs_diff(&a.matvec(&x), &er_minus_el), 1e-11 / h);

        report.push("d2_times_ones", norm_inf(&self.d2().matvec(&ones)), 1e-11 / (h * h));
        report.push("d2_times_x", norm_inf(&self.d2().matvec(&x)), 1e-11 / (h * h));

        let d_res = [
            dot(self.d_left(), &ones).abs(),
            (dot(self.d_left(), &x) - 1.0).abs(),
            dot(self.d_right(), &ones).abs(),
            (dot(self.d_right(), &x) - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        report.push("boundary_derivative_consistency", d_res, 1e-11 / (h * h));

        let m = self.order().closure_rows();
        let p = self.order().boundary_order() as u32;
        let interior_max = self.order().as_usize() as u32 + 1;
        for k in 2..=interior_max {
            let w = grid.monomial(k);
            let exact = derivative_of_monomial(grid.nodes(), k, 2);
            let interior = rows_residual(self.d2(), &w, &exact, m..len - m);
            report.push(format!("accuracy_interior_x{k}"), interior, 1e-10 / (h * h));
            if k <= p + 1 {
                let left = rows_residual(self.d2(), &w, &exact, 0..m);
                let right = rows_residual(self.d2(), &w, &exact, len - m..len);
                report.push(format!("accuracy_boundary_x{k}"), left.max(right), 1e-10 / (h * h));
            }
        }
        report
    }
}

impl VerifySbp for SbpFirstDerivative {
    fn verify(&self) -> SbpReport {
        let grid = self.grid();
        let h = grid.h();
        let len = grid.len();
        let mut report = SbpReport::new(format!(
            "D1 order {} n {}{}",
            self.order(),
            grid.n(),
            self.free_param_t().map_or(String::new(), |t| format!(" t {t}"))
        ));
        report.push("norm_positive", self.h_diag().iter().fold(0.0, |m: f64, w| m.max(-w)), 0.0);

        let q = self.q();
        let mut s = q.add(&q.transpose());
        s[(0, 0)] += 1.0;
        s[(len - 1, len - 1)] -= 1.0;
        report.push("q_plus_qt", s.max_abs(), 1e-13);

        let hq = self.d1().scale_rows(self.h_diag());
        report.push("h_times_d1_is_q", hq.sub(q).max_abs(), 1e-13);

        let m = self.order().closure_rows();
        let p = self.order().boundary_order() as u32;
        for k in 0..=self.order().as_usize() as u32 {
            let w = grid.monomial(k);
            let exact = derivative_of_monomial(grid.nodes(), k, 1);
            let tol = 1e-10 / h.powi(k.max(1) as i32);
            let interior = rows_residual(self.d1(), &w, &exact, m..len - m);
            report.push(format!("accuracy_interior_x{k}"), interior, tol);
            if k <= p {
                let all = rows_residual(self.d1(), &w, &exact, 0..len);
                report.push(format!("accuracy_all_rows_x{k}"), all, tol);
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_d1, build_d2, Grid, InteriorOrder};

    #[test]
    fn sixth_order_classical_passes() {
        let g = Grid::new(24).unwrap();
        let op = build_d2(&g, InteriorOrder::Sixth, Some(490.0)).unwrap();
        let r = verify_sbp(&op);
        assert!(r.all_passed(), "{:?}", r.failures());
        assert!(r.checks.iter().all(|c| c.residual <= 1e-10 / (g.h() * g.h())));
    }

    #[test]
    fn every_order_passes() {
        let g = Grid::new(16).unwrap();
        for (order, alpha) in [
            (InteriorOrder::Second, None),
            (InteriorOrder::Fourth, None),
            (InteriorOrder::Sixth, Some(483.0)),
        ] {
            let r = verify_sbp(&build_d2(&g, order, alpha).unwrap());
            assert!(r.all_passed(), "order {order}: {:?}", r.failures());
            let t = (order == InteriorOrder::Sixth).then_some(-0.2);
            let r1 = verify_sbp(&build_d1(&g, order, t).unwrap());
            assert!(r1.all_passed(), "D1 order {order}: {:?}", r1.failures());
        }
    }
}
