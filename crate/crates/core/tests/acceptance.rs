//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p sbp-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use sbp_core::analysis::{
    alpha_star, alpha_star_spectral, borrowing_capacity, check_rank_relation, compatibility,
    compatibility_min_alpha_with, truncation_optimal_alpha, SpectrumFamily, TruncationNorm,
};
use sbp_core::numkernel::{numeric_rank, sym_eigenvalues, DenseMatrix};
use sbp_core::operators::{
    build_d2, calibrate_beta, solve_closure_system, sixth_order, Grid, InteriorOrder, BETA_ACCURACY,
    BETA_MIN_BANDWIDTH, BETA_SPECTRAL,
};
use sbp_core::pseudoinverse::{moore_penrose, penrose_residuals};
use sbp_core::sat::{build_discretization, BoundaryKind};
use sbp_core::solvers::{
    default_alpha_grid, default_phi_grid, heat_solve, observed_rate, optimum_sweep, poisson_solve, wave_solve,
    ManufacturedSolution, SweepTask, HEAT_DT_SAFETY,
};
use sbp_core::Error;

type Outcome = Result<(bool, String), Error>;

/// Table of published α* roots (n, smaller, larger).
const ALPHA_STAR_ROOTS: [(usize, f64, f64); 14] = [
    (11, 481.3406894997601, 481.3410851822219),
    (12, 481.3408797227131, 481.3408949417200),
    (13, 481.3408847406793, 481.3408899235506),
    (14, 481.3408871324619, 481.3408875317594),
    (15, 481.3408873292311, 481.3408873349902),
    (16, 481.3408873299936, 481.3408873342276),
    (17, 481.3408873319172, 481.3408873323040),
    (18, 481.3408873321098, 481.3408873321114),
    (19, 481.3408873321089, 481.3408873321123),
    (20, 481.3408873321105, 481.3408873321108),
    (21, 481.3408873321106, 481.3408873321106),
    (22, 481.3408873321106, 481.3408873321106),
    (23, 481.3408873321106, 481.3408873321106),
    (24, 481.3408873321106, 481.3408873321106),
];
const ALPHA_STAR_LIMIT: f64 = 481.3408873321106;

/// α-independent corner of `180h·A`, transcribed as exact fractions.
const CORNER_FRACTIONS: [[&str; 6]; 6] = [
    ["-19697/72", "2098907/960", "-3475609/720", "6987397/1440", "-193649/80", "278033/576"],
    ["2098907/960", "-839647/72", "6921397/288", "-387859/16", "6969449/576", "-1739359/720"],
    ["-3475609/720", "6921397/288", "-577009/12", "6943085/144", "-3481031/144", "2321591/480"],
    ["6987397/1440", "-387859/16", "6943085/144", "-1726033/36", "2298631/96", "-3473101/720"],
    ["-193649/80", "6969449/576", "-3481031/144", "2298631/96", "-104756/9", "6235729/2880"],
    ["278033/576", "-1739359/720", "2321591/480", "-3473101/720", "6235729/2880", "0"],
];

fn within_pct(value: f64, target: f64, pct: f64) -> bool {
    (value - target).abs() <= pct * target.abs()
}

fn alpha_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let k = ((hi - lo) / step).round() as usize;
    (0..=k).map(|i| lo + i as f64 * step).map(|a| (a * 1e6).round() / 1e6).collect()
}

fn criterion_alpha_star() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut converged = true;
    for &(n, lo, hi) in &ALPHA_STAR_ROOTS {
        let r = alpha_star(n)?;
        worst = worst.max((r.roots[0] - lo).abs()).max((r.roots[1] - hi).abs());
        if n >= 21 && (r.roots[1] - r.roots[0]).abs() > 1e-12 {
            converged = false;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= 1e-9 && converged && secs < 1.0,
        format!("max |root - table| = {worst:.2e} (tol 1e-9), roots equal for n>=21: {converged}, {secs:.3}s"),
    ))
}

fn criterion_borrowing() -> Outcome {
    let start = Instant::now();
    let g490 = borrowing_capacity(&sixth_order(24, 490.0)?)?.gamma;
    let g483 = borrowing_capacity(&sixth_order(24, 483.0)?)?.gamma;
    let secs = start.elapsed().as_secs_f64();
    let e1 = (g490 - 0.187871502626966).abs();
    let e2 = (g483 - 0.087556118235046).abs();
    Ok((
        e1 <= 1e-9 && e2 <= 1e-9 && secs < 1.0,
        format!("gamma(490) = {g490:.15}, gamma(483) = {g483:.15}, errors {e1:.1e}/{e2:.1e}, {secs:.3}s"),
    ))
}

fn exact_corner(alpha: i64, n: i64) -> Vec<Vec<BigRational>> {
    let k = [1i64, -5, 10, -10, 5, -1];
    let scale = BigRational::new(n.into(), 180.into());
    (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let m0: BigRational = CORNER_FRACTIONS[i][j].parse().expect("fraction");
                    let free = BigRational::from_integer((alpha * k[i] * k[j]).into());
                    (m0 + free) * scale.clone()
                })
                .collect()
        })
        .collect()
}

fn criterion_operator_construction() -> Outcome {
    let n = 24usize;
    let mut corner_err: f64 = 0.0;
    for alpha in [0i64, 490] {
        let op = sixth_order(n, alpha as f64)?;
        let exact = exact_corner(alpha, n as i64);
        for i in 0..6 {
            for j in 0..6 {
                let e = &exact[i][j];
                let got = op.a()[(i, j)];
                let err = if e.is_zero() {
                    got.abs()
                } else {
                    let ef = e.to_f64().expect("finite");
                    (got - ef).abs() / ef.abs()
                };
                corner_err = corner_err.max(err);
            }
        }
    }
    let op = sixth_order(n, 490.0)?;
    let h = 1.0 / n as f64;
    // w·h/43200 as an exact rational, rounded once.
    let weights = [13649i64, 60065, 27110, 53590, 39385, 43801];
    let norm_exact = weights.iter().enumerate().all(|(i, &w)| {
        let exact = BigRational::new(w.into(), (43200 * n as i64).into()).to_f64().expect("finite");
        op.h_diag()[i] == exact && op.h_diag()[n - i] == exact
    });
    let stencil = [2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0];
    let mid = n / 2;
    let mut stencil_err: f64 = 0.0;
    for (k, s) in stencil.iter().enumerate() {
        let expected = s / (180.0 * h * h);
        stencil_err = stencil_err.max((op.d2()[(mid, mid - 3 + k)] - expected).abs() / expected.abs());
    }
    Ok((
        corner_err <= 1e-15 && norm_exact && stencil_err <= 1e-12,
        format!("corner rel err {corner_err:.1e} (tol 1e-15), H boundary exact: {norm_exact}, stencil rel err {stencil_err:.1e}"),
    ))
}

fn criterion_closure_system() -> Outcome {
    let sol = solve_closure_system(&Grid::new(24)?)?;
    let k = [1.0, -5.0, 10.0, -10.0, 5.0, -1.0];
    let dir = &sol.nullspace_direction;
    let mut err: f64 = 0.0;
    for i in 0..6 {
        for j in 0..6 {
            err = err.max((dir[(i, j)] - k[i] * k[j] / 252.0).abs());
        }
    }
    Ok((
        sol.system_rank == 20 && sol.nullspace_dim == 1 && err < 1e-10,
        format!(
            "rank {} (expected 20), nullspace dim {}, |direction - kk^T/252| = {err:.1e}",
            sol.system_rank, sol.nullspace_dim
        ),
    ))
}

/// `A⁺` from the eigendecomposition (independent of the closed form).
fn eigen_pseudoinverse(a: &DenseMatrix) -> DenseMatrix {
    let m = DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice());
    let eig = nalgebra::SymmetricEigen::new(m);
    let tol = 1e-9 * eig.eigenvalues.amax();
    let mut ap = DMatrix::<f64>::zeros(a.rows(), a.cols());
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() > tol {
            let v = eig.eigenvectors.column(k);
            ap += (v * v.transpose()) / lambda;
        }
    }
    DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| ap[(i, j)])
}

fn criterion_penrose() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for order in [InteriorOrder::Second, InteriorOrder::Sixth] {
        for alpha in [484.3, 490.0] {
            for n in [12usize, 24, 50] {
                let op = build_d2(&Grid::new(n)?, order, Some(alpha))?;
                let ap = moore_penrose(&op)?;
                worst = worst.max(penrose_residuals(op.a(), &ap).max());
                if n <= 16 {
                    let e = eigen_pseudoinverse(op.a());
                    oracle = oracle.max(ap.sub(&e).max_abs() / e.max_abs());
                }
            }
        }
    }
    Ok((
        worst <= 1e-8 && oracle <= 1e-7,
        format!("max Penrose/projection residual {worst:.1e} (tol 1e-8), eigen oracle {oracle:.1e} (tol 1e-7)"),
    ))
}

fn criterion_rank() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [12usize, 24] {
        let star = alpha_star(n)?.alpha_star();
        for alpha in [481.4, star, 484.3, 490.0] {
            let rel = check_rank_relation(&sixth_order(n, alpha)?, 1e-9)?;
            if !rel.holds {
                ok = false;
                notes.push(format!("n={n} alpha={alpha}: {} vs {}", rel.rank_a, rel.rank_abar));
            }
        }
    }
    let star = alpha_star(24)?.alpha_star();
    let op = sixth_order(24, star)?;
    let rank = numeric_rank(op.a(), 1e-9)?;
    let rel = check_rank_relation(&op, 1e-9)?;
    ok &= rank == 22;
    Ok((
        ok,
        format!(
            "rank(A) = rank(Abar) + 1 on all 8 cases{}; at alpha*(24): rank(A) = {rank}, rank(Abar) = {}",
            if notes.is_empty() { String::new() } else { format!(" except {}", notes.join(", ")) },
            rel.rank_abar
        ),
    ))
}

fn criterion_psd_boundary() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [12usize, 24] {
        let closed = alpha_star(n)?.alpha_star();
        let spectral = alpha_star_spectral(n, 470.0, 490.0, 1e-9)?;
        worst = worst.max((closed - spectral).abs());
    }
    Ok((worst <= 1e-6, format!("|spectral - closed form| = {worst:.1e} (tol 1e-6)")))
}

fn criterion_compatibility() -> Outcome {
    let grid = Grid::new(24)?;
    match calibrate_beta(&grid) {
        Ok(map) => {
            let a = compatibility_min_alpha_with(&map, BETA_MIN_BANDWIDTH, &grid)?;
            let b = compatibility_min_alpha_with(&map, BETA_SPECTRAL, &grid)?;
            let (ea, eb) = ((a - 481.3588804669321).abs(), (b - 481.6401641339156).abs());
            Ok((
                ea <= 1e-4 && eb <= 1e-4,
                format!("min alpha {a:.10} / {b:.10}, errors {ea:.1e}/{eb:.1e} (tol 1e-4)"),
            ))
        }
        Err(Error::CalibrationAmbiguous(msg)) => {
            // Downgraded form: verdicts at α = 490 only.
            let verdicts: Result<Vec<bool>, Error> = [BETA_MIN_BANDWIDTH, BETA_SPECTRAL, BETA_ACCURACY]
                .iter()
                .map(|&beta| {
                    let map = calibrate_beta(&grid)?;
                    compatibility(&sixth_order(24, 490.0)?, &map.build_d1(&grid, beta)?).map(|r| r.compatible)
                })
                .collect();
            Ok((false, format!("calibration ambiguous ({msg}); verdicts {verdicts:?}")))
        }
        Err(e) => Err(e),
    }
}

fn criterion_truncation() -> Outcome {
    let grid = Grid::new(24)?;
    let l2 = truncation_optimal_alpha(&grid, TruncationNorm::L2)?;
    let hn = truncation_optimal_alpha(&grid, TruncationNorm::H)?;
    let (e1, e2) = ((l2 - 482.5622776076688).abs(), (hn - 483.3965798037094).abs());
    Ok((
        e1 <= 1e-6 && e2 <= 1e-6,
        format!("argmin L2 {l2:.10}, argmin H {hn:.10}, errors {e1:.1e}/{e2:.1e} (tol 1e-6)"),
    ))
}

fn neumann_error(n: usize, alpha: f64) -> Result<(f64, f64), Error> {
    let op = sixth_order(n, alpha)?;
    let disc = build_discretization(&op, BoundaryKind::Neumann, BoundaryKind::Neumann, 1.0)?;
    let sol = poisson_solve(&disc, &ManufacturedSolution::poly5())?;
    Ok((sol.report.h_norm, disc.spectral_radius()?))
}

fn criterion_neumann_poisson() -> Outcome {
    let alphas = alpha_grid(481.4, 495.0, 0.1);
    let errs: Vec<(f64, f64)> = alphas
        .par_iter()
        .map(|&a| neumann_error(24, a).map(|(e, _)| (a, e)))
        .collect::<Result<_, _>>()?;
    let (argmin, _) = errs.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty");
    let (e1, r1) = neumann_error(24, 484.3)?;
    let (e2, r2) = neumann_error(24, 490.0)?;
    let (er, rr) = (e1 / e2, r1 / r2);
    Ok((
        (484.0..=484.6).contains(&argmin) && (0.85..=0.95).contains(&er) && (0.40..=0.45).contains(&rr),
        format!("argmin {argmin:.2} in [484.0, 484.6], error ratio {er:.4} in [0.85, 0.95], rho ratio {rr:.4} in [0.40, 0.45]"),
    ))
}

fn criterion_dirichlet_spectra() -> Outcome {
    let family = SpectrumFamily::Dirichlet { n: 24, phi: 1.0 };
    let alphas = alpha_grid(481.4, 495.0, 0.1);
    let points = family.sweep(&alphas, rayon::current_num_threads())?;
    let best = points
        .iter()
        .min_by(|a, b| a.report.spectral_radius.total_cmp(&b.report.spectral_radius))
        .expect("non-empty");
    let mut zeros = Vec::new();
    for alpha in [best.alpha, 490.0] {
        let report = sym_eigenvalues(&family.matrix(alpha)?)?;
        let tol = 1e-9 * report.spectral_radius;
        zeros.push(report.eigenvalues.iter().filter(|l| l.abs() <= tol).count());
    }
    Ok((
        (best.alpha - 487.30).abs() <= 0.2 && zeros.iter().all(|&z| z == 2),
        format!(
            "argmin rho {:.2} (487.30 +- 0.2), near-zero eigenvalues at argmin/490: {:?}",
            best.alpha, zeros
        ),
    ))
}

fn criterion_table_one() -> Outcome {
    let table = optimum_sweep(24, &default_alpha_grid(), &default_phi_grid(), SweepTask::Dirichlet, rayon::current_num_threads())?;
    let rows = [(1.2, 3.39, 482.80, 1.64), (1.25, 2.73, 482.56, 1.19), (2.79, 1.43, 490.00, 1.70)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (e, r, a, p) in rows {
        let cell = table.nearest(a, p).expect("non-empty");
        let good = within_pct(cell.rel_error, e, 0.15) && within_pct(cell.rel_rho, r, 0.15);
        ok &= good;
        parts.push(format!("({a}, {p}) -> ({:.3}, {:.3})", cell.rel_error, cell.rel_rho));
    }
    let frontier = table.min_rel_rho_within(1.2).expect("some cell within 1.2");
    ok &= within_pct(frontier.rel_rho, 3.39, 0.15);
    parts.push(format!(
        "min rel_rho at rel_error <= 1.2: {:.3} at ({}, {:.3})",
        frontier.rel_rho, frontier.alpha, frontier.phi
    ));
    Ok((ok, parts.join("; ")))
}

fn criterion_quadratic_exactness() -> Outcome {
    let ms = ManufacturedSolution::quad();
    let mut worst: f64 = 0.0;
    for alpha in [484.3, 490.0] {
        let op = sixth_order(24, alpha)?;
        for (l, r, phi) in [
            (BoundaryKind::Neumann, BoundaryKind::Neumann, 1.0),
            (BoundaryKind::Dirichlet, BoundaryKind::Dirichlet, 2.0),
            (BoundaryKind::Dirichlet, BoundaryKind::Neumann, 2.0),
        ] {
            let sol = poisson_solve(&build_discretization(&op, l, r, phi)?, &ms)?;
            worst = worst.max(sol.report.max_norm);
        }
    }
    Ok((worst <= 1e-9, format!("max error {worst:.1e} over Neumann/Dirichlet/mixed (tol 1e-9)")))
}

fn heat_run(n: usize, alpha: f64, t_end: f64) -> Result<Vec<f64>, Error> {
    let op = sixth_order(n, alpha)?;
    let disc = build_discretization(&op, BoundaryKind::Neumann, BoundaryKind::Neumann, 1.0)?;
    let dt = HEAT_DT_SAFETY * sbp_core::solvers::heat_dt_limit(&disc)?;
    match heat_solve(&disc, &ManufacturedSolution::heat_c(3.0), t_end, dt) {
        Ok(traj) => Ok(traj.errors),
        Err(Error::UnstableStep { history, .. }) => Ok(history.into_iter().map(|(_, e)| e).collect()),
        Err(e) => Err(e),
    }
}

fn criterion_heat() -> Outcome {
    let unstable = heat_run(30, 480.0, 10.0)?;
    let growth = unstable.iter().copied().fold(0.0, f64::max) / unstable[0];
    let stable = heat_run(30, 490.0, 10.0)?;
    let mean = stable.iter().sum::<f64>() / stable.len() as f64;
    let peak = stable.iter().copied().fold(0.0, f64::max);
    let ns = [25usize, 50, 100];
    let rate = |alpha: f64| -> Result<f64, Error> {
        let errs: Vec<f64> = ns
            .par_iter()
            .map(|&n| heat_run(n, alpha, 1.0).map(|e| e.iter().sum::<f64>() / e.len() as f64))
            .collect::<Result<_, _>>()?;
        observed_rate(&ns, &errs)
    };
    let (r_star, r_490) = (rate(ALPHA_STAR_LIMIT)?, rate(490.0)?);
    Ok((
        growth > 10.0 && peak <= 5.0 * mean && r_490 - r_star >= 0.3,
        format!(
            "alpha=480 growth {growth:.2e}x; alpha=490 peak/mean {:.2}; rates alpha* {r_star:.2} vs 490 {r_490:.2}",
            peak / mean
        ),
    ))
}

fn wave_mean_error(alpha: f64, phi: f64) -> Result<f64, Error> {
    let op = sixth_order(30, alpha)?;
    let disc = build_discretization(&op, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet, phi)?;
    let traj = wave_solve(&disc, &ManufacturedSolution::wave_trig(), 2.0, 1e-3)?;
    Ok(traj.report.mean_over_time.expect("time average"))
}

fn criterion_wave() -> Outcome {
    let alphas = alpha_grid(481.4, 495.0, 0.1);
    let errs: Vec<(f64, f64)> = alphas
        .par_iter()
        .map(|&a| wave_mean_error(a, 2.0).map(|e| (a, e)))
        .collect::<Result<_, _>>()?;
    let (argmin, _) = errs.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty");
    let by_phi: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
        .par_iter()
        .map(|&p| wave_mean_error(490.0, p))
        .collect::<Result<_, _>>()?;
    let monotone = by_phi.windows(2).all(|w| w[1] < w[0]);
    Ok((
        (482.4..=484.3).contains(&argmin) && monotone,
        format!(
            "argmin {argmin:.2} in [482.4, 484.3]; errors at 490 for phi 1,2,4,8: {}",
            by_phi.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("alpha* reproduction", criterion_alpha_star),
        ("borrowing capacity", criterion_borrowing),
        ("operator construction", criterion_operator_construction),
        ("closure system", criterion_closure_system),
        ("Penrose identities", criterion_penrose),
        ("rank relation", criterion_rank),
        ("PSD boundary", criterion_psd_boundary),
        ("compatibility thresholds", criterion_compatibility),
        ("truncation optimum", criterion_truncation),
        ("Neumann Poisson", criterion_neumann_poisson),
        ("Dirichlet spectra", criterion_dirichlet_spectra),
        ("optimal (alpha, phi) table", criterion_table_one),
        ("quadratic exactness", criterion_quadratic_exactness),
        ("heat stability ordering", criterion_heat),
        ("wave sweep", criterion_wave),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{:02}] {name}: {detail} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
