//! C ABI over `sbp-core`.
//!
//! Every fallible entry point returns an [`SbpStatus`]. On failure the
//! message is kept per thread and can be fetched with
//! [`sbp_last_error_message`]. Handles are opaque; each `*_new` has a
//! matching `*_free`, and freeing a null handle is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sbp_core::analysis::{alpha_star, borrowing_capacity};
use sbp_core::operators::{build_d2, Grid, InteriorOrder, SbpSecondDerivative};
use sbp_core::pseudoinverse::{NeumannMethod, PseudoinverseBundle};
use sbp_core::sat::{build_discretization, BoundaryKind, SatDiscretization};
use sbp_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    SingularMatrix = 4,
    NoConvergence = 5,
    NoCrossing = 6,
    Unstable = 7,
    NumericalFailure = 8,
    Panic = 9,
}

/// Boundary condition on one side of a SAT discretization.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbpBoundary {
    Dirichlet = 0,
    Neumann = 1,
}

/// Which generalized inverse `sbp_pseudoinverse_solve` applies.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbpNeumannMethod {
    MoorePenrose = 0,
    Filtered = 1,
}

/// Second-derivative operator.
pub struct SbpOperator(SbpSecondDerivative);

/// `A⁺`, `G2` and the filtered inverse of an operator.
pub struct SbpPseudoinverse(PseudoinverseBundle);

/// Operator with SAT boundary terms.
pub struct SbpDiscretization(SatDiscretization);

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> SbpStatus {
    match e {
        Error::SingularMatrix { .. }
        | Error::SingularInterior { .. }
        | Error::SingularSystem(_)
        | Error::BorrowingUnavailable => SbpStatus::SingularMatrix,
        Error::NoConvergence { .. } => SbpStatus::NoConvergence,
        Error::NoCrossing { .. } => SbpStatus::NoCrossing,
        Error::UnstableStep { .. } => SbpStatus::Unstable,
        Error::DimensionMismatch(_)
        | Error::InvalidN(_)
        | Error::GridTooSmall { .. }
        | Error::UnsupportedOrder(_)
        | Error::MissingAlpha
        | Error::MissingParameter
        | Error::InvalidPhi(_)
        | Error::TimeStepTooLarge { .. }
        | Error::InvalidArgument(_)
        | Error::NormMismatch(_) => SbpStatus::InvalidArgument,
        _ => SbpStatus::NumericalFailure,
    }
}

/// Runs `f`, recording the error message and catching panics.
fn guard(f: impl FnOnce() -> Result<(), (SbpStatus, String)>) -> SbpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SbpStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside sbp-core".into());
            SbpStatus::Panic
        }
    }
}

fn core<T>(r: sbp_core::Result<T>) -> Result<T, (SbpStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SbpStatus, String) {
    (SbpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, (SbpStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn copy_out(src: &[f64], out: *mut f64, len: usize) -> Result<(), (SbpStatus, String)> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < src.len() {
        return Err((
            SbpStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn sbp_status_message(status: SbpStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SbpStatus::Ok => b"ok\0",
        SbpStatus::NullPointer => b"null pointer\0",
        SbpStatus::InvalidArgument => b"invalid argument\0",
        SbpStatus::BufferTooSmall => b"buffer too small\0",
        SbpStatus::SingularMatrix => b"singular matrix\0",
        SbpStatus::NoConvergence => b"no convergence\0",
        SbpStatus::NoCrossing => b"no crossing\0",
        SbpStatus::Unstable => b"unstable\0",
        SbpStatus::NumericalFailure => b"numerical failure\0",
        SbpStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Release with
/// `sbp_string_free`.
#[no_mangle]
pub extern "C" fn sbp_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_deref() {
        Some(m) => CString::new(m.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must come from `sbp_last_error_message` or be null.
#[no_mangle]
pub unsafe extern "C" fn sbp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds D2 of interior order 2, 4 or 6 on `n` intervals. `alpha` is
/// required for order 6 and ignored otherwise.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sbp_operator_new(order: u32, n: usize, alpha: f64, out: *mut *mut SbpOperator) -> SbpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let order = core(InteriorOrder::try_from(order as usize))?;
        let grid = core(Grid::new(n))?;
        let op = core(build_d2(&grid, order, Some(alpha)))?;
        *out = Box::into_raw(Box::new(SbpOperator(op)));
        Ok(())
    })
}

/// # Safety
/// `op` must come from `sbp_operator_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn sbp_operator_free(op: *mut SbpOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Number of grid points, `n + 1`. Zero for a null handle.
///
/// # Safety
/// `op` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sbp_operator_len(op: *const SbpOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.grid().len())
}

/// Copies the diagonal of H into `out[0..len]`.
///
/// # Safety
/// `op` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sbp_operator_norm(op: *const SbpOperator, out: *mut f64, len: usize) -> SbpStatus {
    guard(|| copy_out(borrow(op, "operator")?.0.h_diag(), out, len))
}

/// Copies D2 row-major into `out[0..len]`; `len` must be at least `(n + 1)²`.
///
/// # Safety
/// `op` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sbp_operator_d2(op: *const SbpOperator, out: *mut f64, len: usize) -> SbpStatus {
    guard(|| copy_out(borrow(op, "operator")?.0.d2().as_slice(), out, len))
}

/// Copies A row-major into `out[0..len]`.
///
/// # Safety
/// `op` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sbp_operator_a(op: *const SbpOperator, out: *mut f64, len: usize) -> SbpStatus {
    guard(|| copy_out(borrow(op, "operator")?.0.a().as_slice(), out, len))
}

/// Borrowing capacity γ of the operator.
///
/// # Safety
/// `op` must be a live handle and `gamma` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sbp_borrowing_capacity(op: *const SbpOperator, gamma: *mut f64) -> SbpStatus {
    guard(|| {
        let op = borrow(op, "operator")?;
        if gamma.is_null() {
            return Err(null("gamma"));
        }
        *gamma = core(borrowing_capacity(&op.0))?.gamma;
        Ok(())
    })
}

/// Both roots of the α* eigenproblem for `n` intervals.
///
/// # Safety
/// `low` and `high` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sbp_alpha_star(n: usize, low: *mut f64, high: *mut f64) -> SbpStatus {
    guard(|| {
        if low.is_null() || high.is_null() {
            return Err(null("output"));
        }
        let r = core(alpha_star(n))?;
        *low = r.roots[0];
        *high = r.roots[1];
        Ok(())
    })
}

/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sbp_pseudoinverse_new(op: *const SbpOperator, out: *mut *mut SbpPseudoinverse) -> SbpStatus {
    guard(|| {
        let op = borrow(op, "operator")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = core(PseudoinverseBundle::new(&op.0))?;
        *out = Box::into_raw(Box::new(SbpPseudoinverse(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from `sbp_pseudoinverse_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn sbp_pseudoinverse_free(p: *mut SbpPseudoinverse) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Mean-zero solution of `A v = b`. `b` and `out` hold `len = n + 1` values.
///
/// # Safety
/// `p` must be a live handle; `b` and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sbp_pseudoinverse_solve(
    p: *const SbpPseudoinverse,
    method: SbpNeumannMethod,
    b: *const f64,
    out: *mut f64,
    len: usize,
) -> SbpStatus {
    guard(|| {
        let p = borrow(p, "pseudoinverse")?;
        if b.is_null() {
            return Err(null("b"));
        }
        let b = std::slice::from_raw_parts(b, len);
        let method = match method {
            SbpNeumannMethod::MoorePenrose => NeumannMethod::MoorePenrose,
            SbpNeumannMethod::Filtered => NeumannMethod::Filtered,
        };
        let v = core(p.0.solve(b, method))?;
        copy_out(&v, out, len)
    })
}

/// SAT discretization of `op` with penalty factor `phi` (> 1 when a side is
/// Dirichlet). The operator is copied; it may be freed afterwards.
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sbp_discretization_new(
    op: *const SbpOperator,
    left: SbpBoundary,
    right: SbpBoundary,
    phi: f64,
    out: *mut *mut SbpDiscretization,
) -> SbpStatus {
    guard(|| {
        let op = borrow(op, "operator")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = |b| match b {
            SbpBoundary::Dirichlet => BoundaryKind::Dirichlet,
            SbpBoundary::Neumann => BoundaryKind::Neumann,
        };
        let d = core(build_discretization(&op.0, kind(left), kind(right), phi))?;
        *out = Box::into_raw(Box::new(SbpDiscretization(d)));
        Ok(())
    })
}

/// # Safety
/// `d` must come from `sbp_discretization_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn sbp_discretization_free(d: *mut SbpDiscretization) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Copies the SAT-modified operator row-major into `out[0..len]`.
///
/// # Safety
/// `d` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sbp_discretization_matrix(d: *const SbpDiscretization, out: *mut f64, len: usize) -> SbpStatus {
    guard(|| copy_out(borrow(d, "discretization")?.0.d().as_slice(), out, len))
}

/// Spectral radius of the SAT-modified operator.
///
/// # Safety
/// `d` must be a live handle and `rho` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sbp_discretization_spectral_radius(d: *const SbpDiscretization, rho: *mut f64) -> SbpStatus {
    guard(|| {
        let d = borrow(d, "discretization")?;
        if rho.is_null() {
            return Err(null("rho"));
        }
        *rho = core(d.0.spectral_radius())?;
        Ok(())
    })
}
