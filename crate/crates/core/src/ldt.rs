//! Lagrangian dual transform for sums of weighted `ln(1 + A/B)` terms, and its
//! composition with the quadratic transform.

use crate::error::{FpError, Result};
use crate::inner::{project, InnerSolver};
use crate::problem::{evaluate_objective, Curvature, FPProblem, ProblemKind, Sense, DENOMINATOR_FLOOR};
use crate::solver::{l2, Recorder, Solution, SolverConfig, Status, Transform};

/// `gamma_i = A_i / B_i`.
pub fn ldt_gamma_update(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(FpError::ShapeMismatch(format!("{} numerators for {} denominators", a.len(), b.len())));
    }
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(index, (&ai, &bi))| {
            if !(bi >= DENOMINATOR_FLOOR) {
                Err(FpError::DegenerateDenominator { index, value: bi })
            } else {
                Ok(ai / bi)
            }
        })
        .collect()
}

/// `sum w_i [ln(1 + gamma_i) - gamma_i + (1 + gamma_i) A_i / (A_i + B_i)]` from raw values.
pub fn ldt_value(a: &[f64], b: &[f64], gamma: &[f64], weights: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for i in 0..a.len() {
        let den = a[i] + b[i];
        if !(den >= DENOMINATOR_FLOOR) {
            return Err(FpError::DegenerateDenominator { index: i, value: den });
        }
        let g = gamma[i];
        s += weights[i] * (g.ln_1p() - g + (1.0 + g) * a[i] / den);
    }
    Ok(s)
}

/// LDT objective of a log-ratio problem at `x` for fixed `gamma`.
pub fn ldt_objective(problem: &FPProblem, x: &[f64], gamma: &[f64]) -> Result<f64> {
    if gamma.len() != problem.ratios.len() {
        return Err(FpError::ShapeMismatch(format!("{} gammas for {} ratios", gamma.len(), problem.ratios.len())));
    }
    if let Some(i) = gamma.iter().position(|g| !(*g >= 0.0)) {
        return Err(FpError::DomainError { index: i, value: gamma[i] });
    }
    let a: Vec<f64> = problem.ratios.iter().map(|r| r.a(x)).collect();
    let b: Vec<f64> = problem.ratios.iter().map(|r| r.b(x)).collect();
    ldt_value(&a, &b, gamma, &problem.weights)
}

/// [`logratio_solve_with`] with one QT sweep per gamma update.
pub fn logratio_solve(problem: &FPProblem, x0: &[f64], inner: &dyn InnerSolver, config: &SolverConfig) -> Result<Solution> {
    logratio_solve_with(problem, x0, inner, config, 1)
}

/// Cycles gamma, then `sweeps` rounds of (QT auxiliary, x) on the ratios
/// `w (1 + gamma) A / (A + B)`. The trace's auxiliary column is `||gamma||`.
pub fn logratio_solve_with(
    problem: &FPProblem,
    x0: &[f64],
    inner: &dyn InnerSolver,
    config: &SolverConfig,
    sweeps: usize,
) -> Result<Solution> {
    config.validate()?;
    if problem.kind != ProblemKind::LogRatio {
        return Err(FpError::WrongKind { expected: "log-ratio", got: problem.kind.name() });
    }
    if problem.ratios.iter().any(|r| r.curvature != Curvature::ConcaveConvex) {
        log::warn!("log-ratio terms are not all concave-convex; the inner steps may not be convex");
    }
    let sweeps = sweeps.max(1);
    let w = &problem.weights;
    let mut x = project(&problem.constraint, x0)?;
    let mut f = evaluate_objective(problem, &x)?;
    let mut rec = Recorder::new(Sense::Maximize, Transform::Quadratic);
    rec.push(f, f, 0.0);
    let mut status = Status::MaxIters;
    'outer: for _ in 0..config.max_iters {
        let (a, b) = match problem.parts(&x) {
            Ok(v) => v,
            Err(_) => {
                status = Status::Degenerate;
                break;
            }
        };
        let gamma = ldt_gamma_update(&a, &b)?;
        for _ in 0..sweeps {
            let y: Vec<f64> = problem
                .ratios
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let (ai, bi) = (r.a(&x), r.b(&x));
                    (w[i] * (1.0 + gamma[i]) * ai.max(0.0)).sqrt() / (ai + bi)
                })
                .collect();
            let sf = |z: &[f64]| -> f64 {
                problem
                    .ratios
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let (ai, bi) = (r.a(z), r.b(z));
                        2.0 * y[i] * (w[i] * (1.0 + gamma[i]) * ai.max(0.0)).sqrt() - y[i] * y[i] * (ai + bi)
                    })
                    .sum()
            };
            let sg = |z: &[f64]| -> Vec<f64> {
                let mut g = vec![0.0; z.len()];
                for (i, r) in problem.ratios.iter().enumerate() {
                    let ai = r.a(z).max(1e-300);
                    let (ga, gb) = (r.grad_a(z), r.grad_b(z));
                    let ca = y[i] * (w[i] * (1.0 + gamma[i])).sqrt() / ai.sqrt();
                    let cq = y[i] * y[i];
                    for k in 0..g.len() {
                        g[k] += ca * ga[k] - cq * (ga[k] + gb[k]);
                    }
                }
                g
            };
            x = inner.maximize(&sf, &sg, &problem.constraint, &x)?;
            if problem.parts(&x).is_err() {
                status = Status::Degenerate;
                break 'outer;
            }
        }
        let fnew = evaluate_objective(problem, &x)?;
        let surrogate = ldt_objective(problem, &x, &gamma)?;
        rec.push(fnew, surrogate, l2(&gamma));
        f = fnew;
        if rec.settled(config.obj_tol) {
            status = Status::Converged;
            break;
        }
    }
    Ok(Solution { x, value: f, trace: rec.finish(status) })
}
