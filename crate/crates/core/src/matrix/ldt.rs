//! Matrix Lagrangian dual transform for log-det rates.

use super::linalg::{hermitian_solve, log_det_hpd, re_trace, CMat};
use crate::error::{FpError, Result};

fn check(sqrt_a: &CMat, b: &CMat) -> Result<()> {
    if !b.is_square() || b.nrows() != sqrt_a.nrows() {
        return Err(FpError::ShapeMismatch(format!(
            "sqrt(A) is {}x{} but B is {}x{}",
            sqrt_a.nrows(),
            sqrt_a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// `Gamma = sqrt(A)^H B^{-1} sqrt(A)`.
pub fn matrix_ldt_gamma_update(sqrt_a: &CMat, b: &CMat, index: usize) -> Result<CMat> {
    check(sqrt_a, b)?;
    let g = sqrt_a.adjoint() * hermitian_solve(b, sqrt_a, index)?;
    Ok((&g + g.adjoint()).scale(0.5))
}

/// `w [ln det(I + Gamma) - Tr Gamma + Tr((I + Gamma) sqrt(A)^H (A + B)^{-1} sqrt(A))]`.
pub fn matrix_ldt_value(sqrt_a: &CMat, b: &CMat, gamma: &CMat, w: f64, index: usize) -> Result<f64> {
    check(sqrt_a, b)?;
    let d = sqrt_a.ncols();
    if gamma.nrows() != d || gamma.ncols() != d {
        return Err(FpError::ShapeMismatch(format!("Gamma must be {d}x{d}")));
    }
    let eye = CMat::identity(d, d);
    let ip = &eye + gamma;
    let total = sqrt_a * sqrt_a.adjoint() + b;
    let inner = sqrt_a.adjoint() * hermitian_solve(&total, sqrt_a, index)?;
    Ok(w * (log_det_hpd(&ip, index)? - re_trace(gamma) + re_trace(&(ip * inner))))
}

/// `w ln det(I + sqrt(A)^H B^{-1} sqrt(A))`.
pub fn log_det_rate(sqrt_a: &CMat, b: &CMat, w: f64, index: usize) -> Result<f64> {
    let g = matrix_ldt_gamma_update(sqrt_a, b, index)?;
    let d = g.nrows();
    Ok(w * log_det_hpd(&(CMat::identity(d, d) + g), index)?)
}
