use std::ffi::CStr;
use std::ptr;

use sbp_ffi::*;

fn last_error() -> Option<String> {
    let p = sbp_last_error_message();
    if p.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { sbp_string_free(p) };
    Some(s)
}

fn operator(order: u32, n: usize, alpha: f64) -> *mut SbpOperator {
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { sbp_operator_new(order, n, alpha, &mut op) }, SbpStatus::Ok);
    op
}

#[test]
fn alpha_star_roots() {
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { sbp_alpha_star(24, &mut lo, &mut hi) }, SbpStatus::Ok);
    assert!((lo - 481.3408873321106).abs() < 1e-9);
    assert!((hi - 481.3408873321106).abs() < 1e-9);
}

#[test]
fn operator_copies_and_borrowing() {
    let op = operator(6, 24, 490.0);
    let len = unsafe { sbp_operator_len(op) };
    assert_eq!(len, 25);

    let mut h = vec![0.0; len];
    assert_eq!(unsafe { sbp_operator_norm(op, h.as_mut_ptr(), len) }, SbpStatus::Ok);
    assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-14);

    let mut small = vec![0.0; len];
    assert_eq!(unsafe { sbp_operator_d2(op, small.as_mut_ptr(), len) }, SbpStatus::BufferTooSmall);
    assert!(last_error().unwrap().contains("625"));
    let mut d2 = vec![0.0; len * len];
    assert_eq!(unsafe { sbp_operator_d2(op, d2.as_mut_ptr(), d2.len()) }, SbpStatus::Ok);
    // D2 annihilates constants.
    for i in 0..len {
        let s: f64 = d2[i * len..(i + 1) * len].iter().sum();
        assert!(s.abs() < 1e-8, "row {i}: {s}");
    }

    let mut gamma = 0.0;
    assert_eq!(unsafe { sbp_borrowing_capacity(op, &mut gamma) }, SbpStatus::Ok);
    assert!((gamma - 0.187871502626966).abs() < 1e-9);
    unsafe { sbp_operator_free(op) };
}

#[test]
fn neumann_solve_is_mean_zero() {
    let op = operator(6, 24, 490.0);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { sbp_pseudoinverse_new(op, &mut p) }, SbpStatus::Ok);
    unsafe { sbp_operator_free(op) };

    let len = 25;
    let mut b: Vec<f64> = (0..len).map(|i| (i as f64).cos()).collect();
    let mean = b.iter().sum::<f64>() / len as f64;
    b.iter_mut().for_each(|x| *x -= mean);
    for method in [SbpNeumannMethod::MoorePenrose, SbpNeumannMethod::Filtered] {
        let mut v = vec![0.0; len];
        let s = unsafe { sbp_pseudoinverse_solve(p, method, b.as_ptr(), v.as_mut_ptr(), len) };
        assert_eq!(s, SbpStatus::Ok);
        assert!(v.iter().sum::<f64>().abs() < 1e-10);
    }
    unsafe { sbp_pseudoinverse_free(p) };
}

#[test]
fn discretization_round_trip() {
    let op = operator(6, 24, 490.0);
    let mut d = ptr::null_mut();
    let s = unsafe { sbp_discretization_new(op, SbpBoundary::Dirichlet, SbpBoundary::Dirichlet, 0.5, &mut d) };
    assert_eq!(s, SbpStatus::InvalidArgument);
    assert!(last_error().unwrap().contains("phi"));

    let s = unsafe { sbp_discretization_new(op, SbpBoundary::Dirichlet, SbpBoundary::Neumann, 2.0, &mut d) };
    assert_eq!(s, SbpStatus::Ok);
    assert!(last_error().is_none());
    let mut rho = 0.0;
    assert_eq!(unsafe { sbp_discretization_spectral_radius(d, &mut rho) }, SbpStatus::Ok);
    assert!(rho > 0.0 && rho.is_finite());
    let mut m = vec![0.0; 625];
    assert_eq!(unsafe { sbp_discretization_matrix(d, m.as_mut_ptr(), 625) }, SbpStatus::Ok);
    unsafe {
        sbp_discretization_free(d);
        sbp_operator_free(op);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { sbp_operator_new(5, 24, 0.0, &mut op) }, SbpStatus::InvalidArgument);
    assert_eq!(unsafe { sbp_operator_new(6, 4, 490.0, &mut op) }, SbpStatus::InvalidArgument);
    assert_eq!(unsafe { sbp_operator_new(6, 24, f64::NAN, &mut op) }, SbpStatus::InvalidArgument);
    assert!(op.is_null());
    assert_eq!(unsafe { sbp_operator_new(6, 24, 490.0, ptr::null_mut()) }, SbpStatus::NullPointer);
    let mut g = 0.0;
    assert_eq!(unsafe { sbp_borrowing_capacity(ptr::null(), &mut g) }, SbpStatus::NullPointer);
    unsafe {
        sbp_operator_free(ptr::null_mut());
        sbp_pseudoinverse_free(ptr::null_mut());
        sbp_discretization_free(ptr::null_mut());
        sbp_string_free(ptr::null_mut());
    }
    let msg = unsafe { CStr::from_ptr(sbp_status_message(SbpStatus::SingularMatrix)) };
    assert_eq!(msg.to_str().unwrap(), "singular matrix");
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/sbp_ffi.h");
    for name in [
        "sbp_status_message",
        "sbp_last_error_message",
        "sbp_string_free",
        "sbp_operator_new",
        "sbp_operator_free",
        "sbp_operator_len",
        "sbp_operator_norm",
        "sbp_operator_d2",
        "sbp_operator_a",
        "sbp_borrowing_capacity",
        "sbp_alpha_star",
        "sbp_pseudoinverse_new",
        "sbp_pseudoinverse_free",
        "sbp_pseudoinverse_solve",
        "sbp_discretization_new",
        "sbp_discretization_free",
        "sbp_discretization_matrix",
        "sbp_discretization_spectral_radius",
        "SBP_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles the C example against the generated header and static library.
#[test]
fn c_example_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if std::process::Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    // Test binaries live in target/<profile>/deps; the static library one level up.
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libsbp_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile_dir();
    let out = dir.join("smoke");
    let status = std::process::Command::new(&cc)
        .arg(root.join("examples/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = std::process::Command::new(&out).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.starts_with("alpha* 481.3408873321"));
    std::fs::remove_dir_all(dir).ok();
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("sbp-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
