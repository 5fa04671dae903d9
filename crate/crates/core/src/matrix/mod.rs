//! Matrix-ratio fractional programming.
//!
//! The structured problem maximizes `sum_i w_i M_i(x)` with
//! `M_i = (A_i x_i)^H (sigma_i^2 I + sum_j B_ij x_j x_j^H B_ij^H)^{-1} (A_i x_i)`
//! over complex vector blocks `x_i`, each in a ball or unconstrained.

pub mod ldt;
pub mod linalg;

use rand::Rng;
use rand_distr::StandardNormal;

pub use ldt::{log_det_rate, matrix_ldt_gamma_update, matrix_ldt_value};
pub use linalg::{CMat, CVec, Complex64};
use linalg::{c, frobenius, hermitian_solve, re_trace, trust_region_quadratic_max};

use crate::error::{FpError, Result};
use crate::problem::Sense;
use crate::solver::{Recorder, SolverConfig, SolverTrace, Status, Transform};

/// Feasible set of one complex block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockSet {
    /// `||x_i||_2 <= radius`.
    Ball(f64),
    Unconstrained,
}

impl BlockSet {
    pub fn project(&self, x: &CVec) -> CVec {
        match *self {
            BlockSet::Ball(r) => {
                let n = x.norm();
                if n > r {
                    x.scale(r / n)
                } else {
                    x.clone()
                }
            }
            BlockSet::Unconstrained => x.clone(),
        }
    }

    fn power(&self) -> Option<f64> {
        match *self {
            BlockSet::Ball(r) => Some(r * r),
            BlockSet::Unconstrained => None,
        }
    }
}

/// `Y* = B^{-1} sqrt(A)` for one general matrix ratio `sqrt(A)^H B^{-1} sqrt(A)`.
pub fn matrix_qt_aux(sqrt_a: &CMat, b: &CMat, index: usize) -> Result<CMat> {
    check_general(sqrt_a, b)?;
    hermitian_solve(b, sqrt_a, index)
}

/// `Re Tr(sqrt(A)^H Y + Y^H sqrt(A) - Y^H B Y)`.
pub fn matrix_qt_surrogate_term(sqrt_a: &CMat, b: &CMat, y: &CMat) -> Result<f64> {
    check_general(sqrt_a, b)?;
    if y.shape() != sqrt_a.shape() {
        return Err(FpError::ShapeMismatch(format!("Y is {:?} but sqrt(A) is {:?}", y.shape(), sqrt_a.shape())));
    }
    let cross = sqrt_a.adjoint() * y;
    Ok(2.0 * re_trace(&cross) - re_trace(&(y.adjoint() * b * y)))
}

/// `Re Tr(sqrt(A)^H B^{-1} sqrt(A))`.
pub fn matrix_ratio_trace(sqrt_a: &CMat, b: &CMat, index: usize) -> Result<f64> {
    check_general(sqrt_a, b)?;
    Ok(re_trace(&(sqrt_a.adjoint() * hermitian_solve(b, sqrt_a, index)?)))
}

fn check_general(sqrt_a: &CMat, b: &CMat) -> Result<()> {
    if !b.is_square() || b.nrows() != sqrt_a.nrows() {
        return Err(FpError::ShapeMismatch(format!("sqrt(A) is {:?} but B is {:?}", sqrt_a.shape(), b.shape())));
    }
    Ok(())
}

/// Frobenius norm of `D`, an upper bound on its largest eigenvalue.
pub fn lambda_bound(d: &CMat) -> f64 {
    frobenius(d)
}

/// Extrapolation weight `max((j - 2) / (j + 1), 0)`.
pub fn extrapolation_eta(j: usize) -> f64 {
    ((j as f64 - 2.0) / (j as f64 + 1.0)).max(0.0)
}

/// `x_prev + eta_{k-1} (x_prev - x_prev2)` for iteration `k >= 1`.
pub fn extrapolation_step(k: usize, x_prev: &[CVec], x_prev2: &[CVec]) -> Vec<CVec> {
    let eta = extrapolation_eta(k.saturating_sub(1));
    x_prev.iter().zip(x_prev2).map(|(a, b)| a + (a - b).scale(eta)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRatioProblem {
    /// `A_i`, `l_i x m_i`.
    pub a: Vec<CMat>,
    /// `B_ij`, `l_i x m_j`.
    pub b: Vec<Vec<CMat>>,
    /// `sigma_i^2`; may be zero.
    pub noise: Vec<f64>,
    pub weights: Vec<f64>,
    pub blocks: Vec<BlockSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSolution {
    pub x: Vec<CVec>,
    pub value: f64,
    pub trace: SolverTrace,
}

impl MatrixRatioProblem {
    pub fn new(a: Vec<CMat>, b: Vec<Vec<CMat>>, noise: Vec<f64>, weights: Vec<f64>, blocks: Vec<BlockSet>) -> Result<Self> {
        let p = Self { a, b, noise, weights, blocks };
        p.validate()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn block_dim(&self, i: usize) -> usize {
        self.a[i].ncols()
    }

    fn validate(&self) -> Result<()> {
        let n = self.a.len();
        let bad = |m: String| Err(FpError::ShapeMismatch(m));
        if n == 0 {
            return bad("no terms".into());
        }
        if self.b.len() != n || self.noise.len() != n || self.weights.len() != n || self.blocks.len() != n {
            return bad("every per-term list must have one entry per term".into());
        }
        for i in 0..n {
            if self.b[i].len() != n {
                return bad(format!("B row {i} has {} entries, expected {n}", self.b[i].len()));
            }
            for j in 0..n {
                if self.b[i][j].nrows() != self.a[i].nrows() || self.b[i][j].ncols() != self.a[j].ncols() {
                    return bad(format!("B_{i}{j} is {:?}", self.b[i][j].shape()));
                }
            }
        }
        if let Some(i) = self.weights.iter().position(|w| !(*w > 0.0)) {
            return Err(FpError::InvalidProblem(format!("weight {i} is not strictly positive")));
        }
        if let Some(i) = self.noise.iter().position(|s| !(*s >= 0.0)) {
            return Err(FpError::InvalidProblem(format!("noise {i} is negative")));
        }
        if self.blocks.iter().any(|b| matches!(b, BlockSet::Ball(r) if !(*r > 0.0))) {
            return Err(FpError::InvalidProblem("ball radii must be positive".into()));
        }
        Ok(())
    }

    fn check_x(&self, x: &[CVec]) -> Result<()> {
        if x.len() != self.len() || x.iter().enumerate().any(|(i, xi)| xi.len() != self.block_dim(i)) {
            return Err(FpError::ShapeMismatch("x blocks do not match the problem".into()));
        }
        Ok(())
    }

    pub fn project(&self, x: &[CVec]) -> Vec<CVec> {
        x.iter().zip(&self.blocks).map(|(xi, s)| s.project(xi)).collect()
    }

    /// `A_i x_i`.
    pub fn signal(&self, x: &[CVec], i: usize) -> CVec {
        &self.a[i] * &x[i]
    }

    /// `sigma_i^2 I + sum_j B_ij x_j x_j^H B_ij^H`.
    pub fn covariance(&self, x: &[CVec], i: usize) -> CMat {
        let l = self.a[i].nrows();
        let mut cov = CMat::identity(l, l).scale(self.noise[i]);
        for (j, xj) in x.iter().enumerate() {
            let v = &self.b[i][j] * xj;
            cov += &v * v.adjoint();
        }
        cov
    }

    pub fn ratio(&self, x: &[CVec], i: usize) -> Result<f64> {
        let s = self.signal(x, i);
        let y = hermitian_solve(&self.covariance(x, i), &column(&s), i)?;
        Ok(s.dotc(&y.column(0)).re)
    }

    /// `sum_i w_i M_i(x)`.
    pub fn objective(&self, x: &[CVec]) -> Result<f64> {
        self.check_x(x)?;
        (0..self.len()).map(|i| Ok(self.weights[i] * self.ratio(x, i)?)).sum()
    }

    /// `y_i = (covariance_i)^{-1} A_i x_i`.
    pub fn aux_update(&self, x: &[CVec]) -> Result<Vec<CVec>> {
        self.check_x(x)?;
        (0..self.len())
            .map(|i| {
                let s = self.signal(x, i);
                Ok(hermitian_solve(&self.covariance(x, i), &column(&s), i)?.column(0).into_owned())
            })
            .collect()
    }

    /// `f_q(x, y) = sum_i w_i [2 Re(y_i^H A_i x_i) - y_i^H covariance_i(x) y_i]`.
    pub fn surrogate(&self, x: &[CVec], y: &[CVec]) -> Result<f64> {
        self.check_x(x)?;
        if y.len() != self.len() {
            return Err(FpError::ShapeMismatch("one auxiliary per term is required".into()));
        }
        let mut s = 0.0;
        for i in 0..self.len() {
            let quad = y[i].dotc(&(self.covariance(x, i) * &y[i])).re;
            s += self.weights[i] * (2.0 * y[i].dotc(&self.signal(x, i)).re - quad);
        }
        Ok(s)
    }

    /// `D_i = sum_j w_j B_ji^H y_j y_j^H B_ji`.
    pub fn d_matrices(&self, y: &[CVec]) -> Vec<CMat> {
        (0..self.len())
            .map(|i| {
                let m = self.block_dim(i);
                let mut d = CMat::zeros(m, m);
                for j in 0..self.len() {
                    let v = self.b[j][i].adjoint() * &y[j];
                    d += (&v * v.adjoint()).scale(self.weights[j]);
                }
                d
            })
            .collect()
    }

    /// `w_i A_i^H y_i`.
    fn linear_terms(&self, y: &[CVec]) -> Vec<CVec> {
        (0..self.len()).map(|i| (self.a[i].adjoint() * &y[i]).scale(self.weights[i])).collect()
    }

    /// Nonhomogeneous lower bound `f_t(x, y, z)` with per-block `lambda`.
    pub fn nonhomogeneous_surrogate(&self, x: &[CVec], y: &[CVec], z: &[CVec], lambda: &[f64]) -> Result<f64> {
        self.check_x(x)?;
        self.check_x(z)?;
        let d = self.d_matrices(y);
        let lin = self.linear_terms(y);
        let mut s = 0.0;
        for i in 0..self.len() {
            let s_i = self.noise[i] * y[i].norm_squared() * self.weights[i];
            let lz = z[i].scale(lambda[i]) - &d[i] * &z[i];
            s += 2.0 * (x[i].dotc(&lin[i]).re + x[i].dotc(&lz).re) - z[i].dotc(&lz).re - lambda[i] * x[i].norm_squared()
                - s_i;
        }
        Ok(s)
    }

    /// Conjugate (Wirtinger) gradient `df_o / d conj(x_i) = w_i A_i^H y_i - D_i x_i` at `y = y*(x)`.
    pub fn gradient(&self, x: &[CVec]) -> Result<Vec<CVec>> {
        let y = self.aux_update(x)?;
        let d = self.d_matrices(&y);
        let lin = self.linear_terms(&y);
        Ok((0..self.len()).map(|i| &lin[i] - &d[i] * &x[i]).collect())
    }

    /// `x_i = P(z_i + (w_i A_i^H y_i - D_i z_i) / lambda_i)`.
    pub fn nonhomogeneous_x_update(&self, y: &[CVec], z: &[CVec], lambda: &[f64]) -> Result<Vec<CVec>> {
        self.check_x(z)?;
        let d = self.d_matrices(y);
        let lin = self.linear_terms(y);
        Ok((0..self.len())
            .map(|i| {
                let step = (&lin[i] - &d[i] * &z[i]).scale(1.0 / lambda[i].max(f64::MIN_POSITIVE));
                self.blocks[i].project(&(&z[i] + step))
            })
            .collect())
    }

    /// Exact block maximizer of `f_q(., y)`: `(D_i + mu I)^{-1} w_i A_i^H y_i`
    /// with the smallest feasible `mu >= 0`.
    pub fn basic_x_update(&self, y: &[CVec]) -> Result<Vec<CVec>> {
        let d = self.d_matrices(y);
        let lin = self.linear_terms(y);
        (0..self.len())
            .map(|i| {
                let x = trust_region_quadratic_max(&d[i], &column(&lin[i]), self.blocks[i].power()).map_err(|e| match e {
                    FpError::SingularDenominator { min_eigenvalue, .. } => {
                        FpError::SingularDenominator { index: i, min_eigenvalue }
                    }
                    other => other,
                })?;
                Ok(x.column(0).into_owned())
            })
            .collect()
    }

    pub fn lambdas(&self, y: &[CVec]) -> Vec<f64> {
        self.d_matrices(y).iter().map(lambda_bound).collect()
    }

    /// Random feasible point (blocks drawn inside their balls).
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Vec<CVec> {
        (0..self.len())
            .map(|i| {
                let v = random_cvec(rng, self.block_dim(i));
                match self.blocks[i] {
                    BlockSet::Ball(r) => v.scale(r * rng.random::<f64>() / v.norm().max(1e-300)),
                    BlockSet::Unconstrained => v,
                }
            })
            .collect()
    }
}

fn column(v: &CVec) -> CMat {
    CMat::from_column_slice(v.len(), 1, v.as_slice())
}

pub fn random_cvec<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn random_cmat<R: Rng>(rng: &mut R, r: usize, cols: usize) -> CMat {
    CMat::from_fn(r, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

fn aux_norm(y: &[CVec]) -> f64 {
    y.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt()
}

/// Algorithm driver for the basic, nonhomogeneous and extrapolated
/// quadratic transforms.
///
/// The extrapolated variant always accepts its step and is not monotone.
/// Its surrogate column holds `f_t` anchored at the extrapolated point.
pub fn solve_matrix_fp(
    problem: &MatrixRatioProblem,
    x0: &[CVec],
    variant: Transform,
    config: &SolverConfig,
) -> Result<MatrixSolution> {
    config.validate()?;
    if !matches!(variant, Transform::Basic | Transform::Nonhomogeneous | Transform::Extrapolated) {
        return Err(FpError::WrongKind { expected: "basic, nonhomogeneous or extrapolated", got: variant.name() });
    }
    problem.check_x(x0)?;
    let mut x = problem.project(x0);
    let mut f = problem.objective(&x)?;
    let mut prev = x.clone();
    let mut rec = Recorder::new(Sense::Maximize, variant);
    rec.push(f, f, 0.0);
    let mut status = Status::MaxIters;
    for k in 1..=config.max_iters {
        let step = || -> Result<(Vec<CVec>, f64, f64)> {
            match variant {
                Transform::Basic => {
                    let y = problem.aux_update(&x)?;
                    let xn = problem.basic_x_update(&y)?;
                    let s = problem.surrogate(&xn, &y)?;
                    Ok((xn, s, aux_norm(&y)))
                }
                _ => {
                    let anchor = if variant == Transform::Extrapolated { extrapolation_step(k, &x, &prev) } else { x.clone() };
                    let y = problem.aux_update(&anchor)?;
                    let lambda = problem.lambdas(&y);
                    let xn = problem.nonhomogeneous_x_update(&y, &anchor, &lambda)?;
                    let s = problem.nonhomogeneous_surrogate(&xn, &y, &anchor, &lambda)?;
                    Ok((xn, s, aux_norm(&y)))
                }
            }
        };
        let (xn, surrogate, an) = match step() {
            Ok(v) => v,
            Err(FpError::SingularDenominator { .. }) => {
                status = Status::Degenerate;
                break;
            }
            Err(e) => return Err(e),
        };
        let fnew = match problem.objective(&xn) {
            Ok(v) => v,
            Err(FpError::SingularDenominator { .. }) => {
                status = Status::Degenerate;
                break;
            }
            Err(e) => return Err(e),
        };
        rec.push(fnew, surrogate, an);
        prev = std::mem::replace(&mut x, xn);
        f = fnew;
        if rec.settled(config.obj_tol) {
            status = Status::Converged;
            break;
        }
    }
    Ok(MatrixSolution { x, value: f, trace: rec.finish(status) })
}

/// Convenience: real scalar as a 1x1 complex matrix.
pub fn scalar_mat(v: f64) -> CMat {
    CMat::from_element(1, 1, c(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn random_problem(seed: u64, n: usize, m: usize, l: usize, noise: f64, radius: f64) -> MatrixRatioProblem {
        let mut rng = seeded(seed);
        let a = (0..n).map(|_| random_cmat(&mut rng, l, m)).collect();
        let b = (0..n).map(|_| (0..n).map(|_| random_cmat(&mut rng, l, m).scale(0.5)).collect()).collect();
        let w = (0..n).map(|i| 0.5 + i as f64 * 0.25).collect();
        MatrixRatioProblem::new(a, b, vec![noise; n], w, vec![BlockSet::Ball(radius); n]).unwrap()
    }

    #[test]
    fn general_aux_example() {
        let b = CMat::identity(2, 2).scale(2.0);
        let sa = CMat::identity(2, 2);
        let y = matrix_qt_aux(&sa, &b, 0).unwrap();
        assert!(frobenius(&(y.clone() - CMat::identity(2, 2).scale(0.5))) < 1e-15);
        assert!((matrix_qt_surrogate_term(&sa, &b, &y).unwrap() - 1.0).abs() < 1e-15);
        assert!((matrix_ratio_trace(&sa, &b, 0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(matrix_qt_surrogate_term(&sa, &b, &CMat::zeros(2, 2)).unwrap(), 0.0);
        assert!(matches!(matrix_qt_surrogate_term(&sa, &b, &CMat::zeros(1, 2)), Err(FpError::ShapeMismatch(_))));
    }

    #[test]
    fn general_aux_is_stationary() {
        // Finite-difference gradient of the surrogate in Y vanishes at Y*.
        let mut rng = seeded(4);
        let g = random_cmat(&mut rng, 3, 3);
        let b = &g * g.adjoint() + CMat::identity(3, 3);
        let sa = random_cmat(&mut rng, 3, 2);
        let y = matrix_qt_aux(&sa, &b, 0).unwrap();
        let h = 1e-6;
        let mut grad_sq = 0.0;
        for idx in 0..y.len() {
            for dir in [c(1.0), Complex64::new(0.0, 1.0)] {
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[idx] += dir * h;
                ym[idx] -= dir * h;
                let d = (matrix_qt_surrogate_term(&sa, &b, &yp).unwrap() - matrix_qt_surrogate_term(&sa, &b, &ym).unwrap()) / (2.0 * h);
                grad_sq += d * d;
            }
        }
        assert!(grad_sq.sqrt() < 1e-8, "{}", grad_sq.sqrt());
    }

    #[test]
    fn lambda_examples() {
        let d = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0), c(4.0)]));
        assert_eq!(lambda_bound(&d), 5.0);
        assert!((lambda_bound(&CMat::identity(3, 3)) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(lambda_bound(&CMat::zeros(2, 2)), 0.0);
    }

    #[test]
    fn eta_examples() {
        assert_eq!(extrapolation_eta(1), 0.0);
        assert_eq!(extrapolation_eta(5), 0.5);
        let a = vec![CVec::from_vec(vec![c(1.0), c(2.0)])];
        for k in 1..10 {
            assert_eq!(extrapolation_step(k, &a, &a), a);
        }
    }

    #[test]
    fn nonhomogeneous_pure_gradient_step() {
        // One term, A = I, B = 0: D = 0 and w A^H y = (1, 0).
        let p = MatrixRatioProblem::new(
            vec![CMat::identity(2, 2)],
            vec![vec![CMat::zeros(2, 2)]],
            vec![1.0],
            vec![1.0],
            vec![BlockSet::Unconstrained],
        )
        .unwrap();
        let y = vec![CVec::from_vec(vec![c(1.0), c(0.0)])];
        let z = vec![CVec::zeros(2)];
        let x = p.nonhomogeneous_x_update(&y, &z, &[1.0]).unwrap();
        assert_eq!(x[0], CVec::from_vec(vec![c(1.0), c(0.0)]));
        let pb = MatrixRatioProblem { blocks: vec![BlockSet::Ball(1.0)], ..p.clone() };
        let y2 = vec![CVec::from_vec(vec![c(2.0), c(0.0)])];
        let x = pb.nonhomogeneous_x_update(&y2, &z, &[1.0]).unwrap();
        assert!((x[0][0].re - 1.0).abs() < 1e-15 && x[0][1].norm() == 0.0);
    }

    #[test]
    fn scale_invariant_scalar_ratio() {
        let p = MatrixRatioProblem::new(vec![scalar_mat(1.0)], vec![vec![scalar_mat(1.0)]], vec![0.0], vec![1.0], vec![BlockSet::Ball(2.0)])
            .unwrap();
        for variant in [Transform::Basic, Transform::Nonhomogeneous, Transform::Extrapolated] {
            let s = solve_matrix_fp(&p, &[CVec::from_vec(vec![c(0.7)])], variant, &SolverConfig::default()).unwrap();
            assert!((s.value - 1.0).abs() < 1e-12, "{variant}: {}", s.value);
        }
    }

    #[test]
    fn tiny_pilot_example() {
        let p = MatrixRatioProblem::new(vec![scalar_mat(1.0)], vec![vec![scalar_mat(1.0)]], vec![1.0], vec![1.0], vec![BlockSet::Ball(2.0)])
            .unwrap();
        for variant in [Transform::Basic, Transform::Nonhomogeneous, Transform::Extrapolated] {
            let cfg = SolverConfig::default().with_obj_tol(1e-14).with_max_iters(5000);
            let s = solve_matrix_fp(&p, &[CVec::from_vec(vec![c(0.3)])], variant, &cfg).unwrap();
            assert!((s.value - 0.8).abs() < 1e-8, "{variant}: {}", s.value);
            assert!((s.x[0].norm_squared() - 4.0).abs() < 1e-6);
        }
    }

    #[test]
    fn singular_start_is_an_error() {
        let p = MatrixRatioProblem::new(vec![scalar_mat(1.0)], vec![vec![scalar_mat(1.0)]], vec![0.0], vec![1.0], vec![BlockSet::Ball(2.0)])
            .unwrap();
        let r = solve_matrix_fp(&p, &[CVec::zeros(1)], Transform::Basic, &SolverConfig::default());
        assert!(matches!(r, Err(FpError::SingularDenominator { index: 0, .. })));
    }

    #[test]
    fn sandwich_and_chain() {
        let p = random_problem(21, 3, 3, 2, 0.5, 1.5);
        let mut rng = seeded(22);
        for _ in 0..50 {
            let x = p.random_point(&mut rng);
            let xh = p.random_point(&mut rng);
            let z = p.random_point(&mut rng);
            let fo = p.objective(&x).unwrap();
            let yh = p.aux_update(&xh).unwrap();
            let fq = p.surrogate(&x, &yh).unwrap();
            assert!(fq <= fo + 1e-9);
            let lam = p.lambdas(&yh);
            let ft = p.nonhomogeneous_surrogate(&x, &yh, &z, &lam).unwrap();
            assert!(ft <= fq + 1e-9);
            let ys = p.aux_update(&x).unwrap();
            assert!((p.surrogate(&x, &ys).unwrap() - fo).abs() < 1e-9);
            let lam = p.lambdas(&ys);
            assert!((p.nonhomogeneous_surrogate(&x, &ys, &x, &lam).unwrap() - fo).abs() < 1e-9);
        }
    }

    #[test]
    fn lambda_dominates_eigenvalues() {
        let p = random_problem(5, 2, 3, 3, 1.0, 1.0);
        let mut rng = seeded(6);
        let y = p.aux_update(&p.random_point(&mut rng)).unwrap();
        for d in p.d_matrices(&y) {
            let max = linalg::hermitian_eigen(&d).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            assert!(lambda_bound(&d) >= max - 1e-12);
        }
    }

    #[test]
    fn variants_agree_and_basic_is_monotone() {
        let p = random_problem(8, 2, 3, 3, 0.3, 1.0);
        let mut rng = seeded(9);
        let x0 = p.random_point(&mut rng);
        let cfg = SolverConfig::default().with_obj_tol(1e-12).with_max_iters(20_000);
        let b = solve_matrix_fp(&p, &x0, Transform::Basic, &cfg).unwrap();
        let n = solve_matrix_fp(&p, &x0, Transform::Nonhomogeneous, &cfg).unwrap();
        assert!(b.trace.is_monotone(1e-10));
        assert!(n.trace.is_monotone(1e-10));
        assert!(b.trace.iterations() <= n.trace.iterations());
    }
}
