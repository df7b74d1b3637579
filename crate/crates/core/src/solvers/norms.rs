use serde::Serialize;

use crate::error::{Error, Result};

/// Norms of an error vector `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorReport {
    /// `√(εᵀHε)`.
    pub h_norm: f64,
    /// `√(εᵀε)`.
    pub l2_norm: f64,
    pub max_norm: f64,
    /// Arithmetic mean of the H-norm over all recorded time steps.
    pub mean_over_time: Option<f64>,
}

pub fn error_norms(eps: &[f64], h_diag: &[f64]) -> Result<ErrorReport> {
    if eps.len() != h_diag.len() {
        return Err(Error::DimensionMismatch(format!(
            "error vector has length {}, norm has {}",
            eps.len(),
            h_diag.len()
        )));
    }
    let h2: f64 = eps.iter().zip(h_diag).map(|(e, w)| e * e * w).sum();
    let l2: f64 = eps.iter().map(|e| e * e).sum();
    Ok(ErrorReport {
        h_norm: h2.sqrt(),
        l2_norm: l2.sqrt(),
        max_norm: eps.iter().fold(0.0, |m: f64, e| m.max(e.abs())),
        mean_over_time: None,
    })
}

/// H-norm alone; used inside time loops.
pub(crate) fn h_norm(eps: &[f64], h_diag: &[f64]) -> f64 {
    eps.iter().zip(h_diag).map(|(e, w)| e * e * w).sum::<f64>().sqrt()
}

/// Observed convergence rate: minus the least-squares slope of
/// `log(error)` against `log(n)`.
pub fn observed_rate(ns: &[usize], errors: &[f64]) -> Result<f64> {
    if ns.len() != errors.len() || ns.len() < 2 {
        return Err(Error::InvalidArgument(
            "convergence rate needs at least two (n, error) pairs".into(),
        ));
    }
    if errors.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidArgument("errors must be positive and finite".into()));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let m = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / m;
    let ym = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    Ok(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_with_uniform_norm() {
        let n = 10;
        let h = 1.0 / n as f64;
        let r = error_norms(&vec![1.0; n + 1], &vec![h; n + 1]).unwrap();
        assert!((r.h_norm - ((n + 1) as f64 * h).sqrt()).abs() < 1e-15);
        assert!((r.l2_norm - ((n + 1) as f64).sqrt()).abs() < 1e-15);
        assert_eq!(r.max_norm, 1.0);
    }

    #[test]
    fn zero_error() {
        let r = error_norms(&[0.0; 4], &[1.0; 4]).unwrap();
        assert_eq!((r.h_norm, r.l2_norm, r.max_norm), (0.0, 0.0, 0.0));
    }

    #[test]
    fn rate_of_power_law() {
        let ns = [25, 50, 100];
        let errs: Vec<f64> = ns.iter().map(|&n| 3.0 * (n as f64).powf(-4.5)).collect();
        assert!((observed_rate(&ns, &errs).unwrap() - 4.5).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert!(error_norms(&[0.0; 3], &[1.0; 4]).is_err());
    }
}
