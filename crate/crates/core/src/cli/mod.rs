//! The `sbp` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
//! 3 numerical error, 4 failed check in `--check` mode.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::export::csv_string;
use crate::operators::{build_d2, Grid, InteriorOrder, SbpSecondDerivative};
use crate::sat::BoundaryKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "sbp", version, about = "Narrow-stencil SBP operators with a free closure parameter")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Compare against published values where the flags allow it; exit 4 on mismatch.
    #[arg(long, global = true)]
    check: bool,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum BcChoice {
    Dirichlet,
    Neumann,
    /// Dirichlet at x = 0, Neumann at x = 1.
    Mixed,
}

impl BcChoice {
    pub(crate) fn sides(self) -> (BoundaryKind, BoundaryKind) {
        match self {
            BcChoice::Dirichlet => (BoundaryKind::Dirichlet, BoundaryKind::Dirichlet),
            BcChoice::Neumann => (BoundaryKind::Neumann, BoundaryKind::Neumann),
            BcChoice::Mixed => (BoundaryKind::Dirichlet, BoundaryKind::Neumann),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub(crate) struct OperatorArgs {
    /// Interior order of accuracy: 2, 4 or 6.
    #[arg(long, default_value_t = 6)]
    order: usize,
    /// Number of grid intervals.
    #[arg(long, default_value_t = 24)]
    n: usize,
    /// Free closure parameter (order 6 only).
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
}

impl OperatorArgs {
    pub(crate) fn build(&self) -> crate::Result<SbpSecondDerivative> {
        build_d2(&Grid::new(self.n)?, InteriorOrder::try_from(self.order)?, self.alpha)
    }
}

#[derive(Args, Debug, Clone)]
pub(crate) struct AlphaRange {
    /// Explicit α values (comma separated); overrides the range.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 481.4)]
    alpha_min: f64,
    #[arg(long, default_value_t = 495.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha_step: f64,
}

impl AlphaRange {
    pub(crate) fn values(&self) -> crate::Result<Vec<f64>> {
        if !self.alphas.is_empty() {
            return Ok(self.alphas.clone());
        }
        range(self.alpha_min, self.alpha_max, self.alpha_step)
    }
}

/// `lo, lo + step, …, hi` with values rounded to 1e-9 so that decimal
/// steps land on decimal values.
pub(crate) fn range(lo: f64, hi: f64, step: f64) -> crate::Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "invalid range {lo}..{hi} step {step}"
        )));
    }
    let k = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=k).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect())
}

#[derive(Subcommand, Debug)]
pub(crate) enum Command {
    /// Build an operator (or, with --bc, a SAT discretization) and emit it.
    BuildOperator {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, value_enum)]
        bc: Option<BcChoice>,
        #[arg(long, default_value_t = 2.0)]
        phi: f64,
    },
    /// Evaluate every SBP invariant and print the residuals.
    Verify {
        #[command(flatten)]
        op: OperatorArgs,
        /// Which operator to check.
        #[arg(long, value_enum, default_value = "d2")]
        operator: commands::OperatorKind,
        /// Raw family coordinate of the order-6 first derivative.
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        /// β of the order-6 first derivative (calibrated on the grid).
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Roots of the α* eigenproblem.
    AlphaStar {
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, value_enum, default_value = "closed-form")]
        method: commands::AlphaStarMethod,
    },
    /// Borrowing capacity γ.
    Borrowing {
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// Compatibility of D2(α) with D1(β).
    Compat {
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
    },
    /// Smallest α compatible with D1(β).
    CompatMinAlpha {
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long)]
        beta: f64,
    },
    /// Truncation vector and its optimal α.
    Truncation {
        #[arg(long, default_value_t = 24)]
        n: usize,
        /// α at which to report the truncation vector.
        #[arg(long, default_value_t = 490.0)]
        alpha: f64,
    },
    /// Eigenvalues of a matrix family over a range of α.
    Spectrum {
        #[arg(long, value_enum, default_value = "dirichlet")]
        family: commands::FamilyChoice,
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        phi: f64,
        #[command(flatten)]
        range: AlphaRange,
    },
    /// Steady −u_xx = f with a manufactured solution.
    Poisson {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, value_enum, default_value = "dirichlet")]
        bc: BcChoice,
        #[arg(long, default_value_t = 2.0)]
        phi: f64,
        /// poly5, quad, heat_c, heat_c:<c> or wave_trig.
        #[arg(long, default_value = "poly5")]
        solution: String,
        /// Neumann solver: moore-penrose or filtered.
        #[arg(long, default_value = "moore-penrose")]
        method: String,
    },
    /// u_t = u_xx + f marched with RK4.
    Heat {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, value_enum, default_value = "neumann")]
        bc: BcChoice,
        #[arg(long, default_value_t = 2.0)]
        phi: f64,
        #[arg(long, default_value = "heat_c")]
        solution: String,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        /// Time step; defaults to half the RK4 stability limit.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value_t = crate::solvers::DEFAULT_SNAPSHOT_STRIDE)]
        stride: usize,
        /// CSV file for solution snapshots.
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// u_tt = u_xx + f marched with RK4; several α or φ give a summary table.
    Wave {
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "490")]
        alphas: Vec<f64>,
        #[arg(long, value_enum, default_value = "dirichlet")]
        bc: BcChoice,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        phis: Vec<f64>,
        #[arg(long, default_value = "wave_trig")]
        solution: String,
        #[arg(long, default_value_t = 2.0)]
        t_end: f64,
        #[arg(long, default_value_t = crate::solvers::WAVE_DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value_t = crate::solvers::DEFAULT_SNAPSHOT_STRIDE)]
        stride: usize,
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Poisson error and spectral radius over an (α, φ) grid with its Pareto frontier.
    OptimumSweep {
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, default_value = "dirichlet")]
        task: String,
        /// Explicit α values; the default grid is 481.4..495 step 0.1 plus 482.56.
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        /// Explicit φ values; the default grid is 50 log-spaced points in [1.01, 32] plus 1.19, 1.64, 1.70.
        #[arg(long, value_delimiter = ',')]
        phis: Vec<f64>,
    },
}

/// One `--check` comparison.
#[derive(Debug, Clone)]
pub(crate) struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    pub(crate) fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Rendered result of a command.
pub(crate) struct Output {
    json: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    default_format: Format,
    checks: Vec<Check>,
    /// Error to report after the output has been written.
    failure: Option<Error>,
}

impl Output {
    pub(crate) fn new(json: String, header: &[&str], rows: Vec<Vec<String>>, default_format: Format) -> Self {
        Output {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            default_format,
            checks: Vec::new(),
            failure: None,
        }
    }

    pub(crate) fn with_checks(mut self, checks: Vec<Check>) -> Self {
        self.checks = checks;
        self
    }

    pub(crate) fn with_failure(mut self, failure: Option<Error>) -> Self {
        self.failure = failure;
        self
    }

    fn render(&self, format: Option<Format>) -> crate::Result<String> {
        match format.unwrap_or(self.default_format) {
            Format::Json => Ok(self.json.clone()),
            Format::Csv => {
                let header: Vec<&str> = self.header.iter().map(String::as_str).collect();
                csv_string(&header, &self.rows)
            }
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Serialization(_) => EXIT_IO,
        Error::DimensionMismatch(_)
        | Error::InvalidN(_)
        | Error::GridTooSmall { .. }
        | Error::UnsupportedOrder(_)
        | Error::MissingAlpha
        | Error::MissingParameter
        | Error::InvalidPhi(_)
        | Error::TimeStepTooLarge { .. }
        | Error::InvalidArgument(_)
        | Error::NormMismatch(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> crate::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                // A closed reader (e.g. `| head`) is not a failure.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let output = match commands::execute(&cli.command, cli.jobs.max(1), cli.check) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let text = match output.render(cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(e) = write_output(cli.out.as_ref(), &text) {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    if cli.check {
        if output.checks.is_empty() {
            eprintln!("check: no published value applies to these flags");
        }
        for c in &output.checks {
            eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        if output.checks.iter().any(|c| !c.passed) {
            return EXIT_CHECK_FAILED;
        }
        if let Some(e) = &output.failure {
            eprintln!("error: {e}");
            return exit_code(e);
        }
        return EXIT_OK;
    }
    if let Some(e) = &output.failure {
        eprintln!("error: {e}");
        return exit_code(e);
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_range() {
        let r = range(481.4, 495.0, 0.1).unwrap();
        assert_eq!(r.len(), 137);
        assert_eq!(r[86], 490.0);
        assert_eq!(*r.last().unwrap(), 495.0);
        assert!(range(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["sbp", "no-such-command"]), EXIT_USAGE);
        assert_eq!(run(["sbp", "borrowing", "--n", "3", "--alpha", "490"]), EXIT_USAGE);
    }
}
