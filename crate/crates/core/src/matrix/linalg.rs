//! Complex dense helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{FpError, Result};

pub type Complex64 = Complex<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Smallest eigenvalue accepted for a Hermitian positive-definite matrix.
pub const PD_FLOOR: f64 = 1e-10;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMat) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
    SymmetricEigen::new(hermitian_part(m))
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigen(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Inverse of a Hermitian positive-definite matrix; `index` tags the error.
pub fn hermitian_inverse(m: &CMat, index: usize) -> Result<CMat> {
    let eig = hermitian_eigen(m);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > PD_FLOOR) {
        return Err(FpError::SingularDenominator { index, min_eigenvalue: min });
    }
    let inv = eig.eigenvalues.map(|l| c(1.0 / l));
    let u = &eig.eigenvectors;
    Ok(u * CMat::from_diagonal(&inv) * u.adjoint())
}

/// Solves `m x = rhs` for Hermitian positive-definite `m`.
pub fn hermitian_solve(m: &CMat, rhs: &CMat, index: usize) -> Result<CMat> {
    let h = hermitian_part(m);
    if let Some(ch) = h.clone().cholesky() {
        let min_diag = ch.l_dirty().diagonal().iter().map(|d| d.re).fold(f64::INFINITY, f64::min);
        if min_diag * min_diag > PD_FLOOR {
            return Ok(ch.solve(rhs));
        }
    }
    Ok(hermitian_inverse(&h, index)? * rhs)
}

/// Hermitian PSD square root. Eigenvalues in `(-1e-10, 0)` are clamped to zero;
/// anything more negative is rejected.
pub fn psd_sqrt(m: &CMat) -> Result<CMat> {
    let eig = hermitian_eigen(m);
    let mut vals = Vec::with_capacity(eig.eigenvalues.len());
    for &l in eig.eigenvalues.iter() {
        if l < -PD_FLOOR {
            return Err(FpError::SingularDenominator { index: 0, min_eigenvalue: l });
        }
        vals.push(c(l.max(0.0).sqrt()));
    }
    let u = &eig.eigenvectors;
    Ok(u * CMat::from_diagonal(&DVector::from_vec(vals)) * u.adjoint())
}

/// `ln det` of a Hermitian positive-definite matrix.
pub fn log_det_hpd(m: &CMat, index: usize) -> Result<f64> {
    let eig = hermitian_eigen(m);
    let mut s = 0.0;
    for &l in eig.eigenvalues.iter() {
        if !(l > PD_FLOOR) {
            return Err(FpError::SingularDenominator { index, min_eigenvalue: l });
        }
        s += l.ln();
    }
    Ok(s)
}

pub fn re_trace(m: &CMat) -> f64 {
    m.trace().re
}

/// `Re Tr(a^H b)`, the real inner product.
pub fn re_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximizes `2 Re Tr(X^H C) - Tr(X^H Q X)` over `||X||_F^2 <= power`
/// (or unconstrained when `power` is `None`), for Hermitian PSD `Q`.
///
/// The maximizer is `(Q + mu I)^{-1} C` with the smallest `mu >= 0` meeting
/// the power budget; `mu` is found by bisection in the eigenbasis of `Q`.
pub fn trust_region_quadratic_max(q: &CMat, cm: &CMat, power: Option<f64>) -> Result<CMat> {
    let eig = hermitian_eigen(q);
    let u = &eig.eigenvectors;
    let lam: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
    let proj = u.adjoint() * cm;
    let row_energy: Vec<f64> = (0..proj.nrows()).map(|r| proj.row(r).iter().map(|z| z.norm_sqr()).sum()).collect();
    let scale = lam.iter().copied().fold(0.0, f64::max).max(1.0);
    let norm_sq = |mu: f64| -> f64 {
        row_energy
            .iter()
            .zip(&lam)
            .map(|(e, l)| if *e == 0.0 { 0.0 } else { e / ((l + mu) * (l + mu)) })
            .sum()
    };
    let solve = |mu: f64| -> CMat {
        let mut out = proj.clone();
        for r in 0..out.nrows() {
            let d = lam[r] + mu;
            let inv = if d > 1e-14 * scale { 1.0 / d } else { 0.0 };
            out.row_mut(r).scale_mut(inv);
        }
        u * out
    };
    let unconstrained_ok = |p: f64| {
        // Any component of C in the null space of Q makes mu = 0 unbounded.
        let blocked = row_energy.iter().zip(&lam).any(|(e, l)| *e > 0.0 && *l <= 1e-14 * scale);
        !blocked && norm_sq(0.0) <= p
    };
    match power {
        None => {
            if row_energy.iter().zip(&lam).any(|(e, l)| *e > 1e-300 && *l <= 1e-14 * scale) {
                return Err(FpError::SingularDenominator { index: 0, min_eigenvalue: 0.0 });
            }
            Ok(solve(0.0))
        }
        Some(p) if !(p > 0.0) => Err(FpError::InvalidProblem(format!("power budget must be positive, got {p}"))),
        Some(p) => {
            if unconstrained_ok(p) {
                return Ok(solve(0.0));
            }
            // ||X(mu)||^2 <= ||C||^2 / mu^2, so this bracket always satisfies the budget.
            let total: f64 = row_energy.iter().sum();
            let mut lo = 0.0;
            let mut hi = (total / p).sqrt().max(f64::MIN_POSITIVE);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if norm_sq(mid) > p {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * hi {
                    break;
                }
            }
            let x = solve(hi);
            // Remove the residual bisection slack so the budget holds exactly.
            let n = frobenius(&x);
            let cap = p.sqrt();
            Ok(if n > cap { x.scale(cap / n) } else { x })
        }
    }
}

/// Projection of the columns of `m` onto balls of the given radius.
pub fn project_columns(m: &CMat, radius: f64) -> CMat {
    let mut out = m.clone();
    for mut col in out.column_iter_mut() {
        let n = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > radius {
            col.scale_mut(radius / n);
        }
    }
    out
}

/// Projection onto `||m||_F <= radius`.
pub fn project_frobenius(m: &CMat, radius: f64) -> CMat {
    let n = frobenius(m);
    if n > radius {
        m.scale(radius / n)
    } else {
        m.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;
    use rand_distr::StandardNormal;

    pub(crate) fn random_cmat<R: Rng>(rng: &mut R, r: usize, c: usize) -> CMat {
        CMat::from_fn(r, c, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    }

    fn random_hpd<R: Rng>(rng: &mut R, n: usize) -> CMat {
        let g = random_cmat(rng, n, n);
        &g * g.adjoint() + CMat::identity(n, n).scale(0.5)
    }

    #[test]
    fn inverse_and_solve() {
        let mut rng = seeded(1);
        let b = random_hpd(&mut rng, 4);
        let inv = hermitian_inverse(&b, 0).unwrap();
        assert!(frobenius(&(&b * &inv - CMat::identity(4, 4))) < 1e-10);
        let rhs = random_cmat(&mut rng, 4, 2);
        let x = hermitian_solve(&b, &rhs, 0).unwrap();
        assert!(frobenius(&(&b * x - rhs)) < 1e-10);
        assert!(matches!(hermitian_inverse(&CMat::zeros(2, 2), 3), Err(FpError::SingularDenominator { index: 3, .. })));
    }

    #[test]
    fn sqrt_round_trip() {
        let mut rng = seeded(2);
        let b = random_hpd(&mut rng, 3);
        let s = psd_sqrt(&b).unwrap();
        assert!(frobenius(&(&s * &s - &b)) < 1e-10);
        let neg = CMat::from_diagonal_element(2, 2, c(-1.0));
        assert!(psd_sqrt(&neg).is_err());
        let tiny = CMat::from_diagonal(&DVector::from_vec(vec![c(-1e-12), c(4.0)]));
        let s = psd_sqrt(&tiny).unwrap();
        assert!((s[(1, 1)].re - 2.0).abs() < 1e-12 && s[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn trust_region_inside_and_on_boundary() {
        let mut rng = seeded(3);
        let q = random_hpd(&mut rng, 3);
        let cm = random_cmat(&mut rng, 3, 1);
        let free = trust_region_quadratic_max(&q, &cm, None).unwrap();
        assert!(frobenius(&(&q * &free - &cm)) < 1e-10);
        let budget = 0.25 * frobenius(&free).powi(2);
        let x = trust_region_quadratic_max(&q, &cm, Some(budget)).unwrap();
        assert!((frobenius(&x).powi(2) - budget).abs() < 1e-10 * budget);
        // KKT: C - Q X = mu X with mu >= 0.
        let r = &cm - &q * &x;
        let mu = re_inner(&x, &r) / frobenius(&x).powi(2);
        assert!(mu > 0.0);
        assert!(frobenius(&(r - x.scale(mu))) < 1e-8);
    }

    #[test]
    fn trust_region_zero_quadratic() {
        let q = CMat::zeros(2, 2);
        let cm = CMat::from_column_slice(2, 1, &[c(3.0), c(4.0)]);
        let x = trust_region_quadratic_max(&q, &cm, Some(1.0)).unwrap();
        assert!((x[(0, 0)].re - 0.6).abs() < 1e-12 && (x[(1, 0)].re - 0.8).abs() < 1e-12);
        assert!(trust_region_quadratic_max(&q, &cm, None).is_err());
    }
}
