//! Scalar-ratio transforms: Dinkelbach's method (single and max-min), the
//! quadratic transform and its inverse, the AM-GM transform, the unified
//! quadratic transform, and the Charnes-Cooper lift.

use crate::error::{FpError, Result};
use crate::inner::{project, InnerSolver};
use crate::problem::{
    evaluate_objective, ConstraintSet, Curvature, FPProblem, OuterFunction, ProblemKind, Sense, DENOMINATOR_FLOOR,
};
use crate::solver::{l2, Recorder, Solution, SolverConfig, Status, Transform};

/// Inverse-QT brackets below this count as degenerate.
pub const BRACKET_FLOOR: f64 = 1e-12;

/// Auxiliary variables held by the scalar transforms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuxiliaryState {
    /// Quadratic-transform auxiliaries.
    pub y: Vec<f64>,
    /// Inverse-QT (or AM-GM) auxiliaries.
    pub y_tilde: Vec<f64>,
    /// Lagrangian-dual auxiliaries.
    pub gamma: Vec<f64>,
    pub dinkelbach_y: f64,
}

impl AuxiliaryState {
    pub fn norm(&self) -> f64 {
        let sq: f64 = self.y.iter().chain(&self.y_tilde).chain(&self.gamma).map(|v| v * v).sum();
        (sq + self.dinkelbach_y * self.dinkelbach_y).sqrt()
    }
}

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(FpError::ShapeMismatch(format!("{} numerators for {} denominators", a.len(), b.len())));
    }
    Ok(())
}

/// Closed-form optimal auxiliaries for frozen numerator/denominator values.
///
/// * QT: `y = sqrt(A) / B`
/// * inverse QT: `y = sqrt(B) / A`
/// * AM-GM: `y = 1 / (2 A B)`
pub fn update_auxiliaries(kind: Transform, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check_lengths(a, b)?;
    let mut out = Vec::with_capacity(a.len());
    for (index, (&ai, &bi)) in a.iter().zip(b).enumerate() {
        let y = match kind {
            Transform::Quadratic => {
                if !(bi >= DENOMINATOR_FLOOR) {
                    return Err(FpError::DegenerateDenominator { index, value: bi });
                }
                if ai < 0.0 {
                    return Err(FpError::DegenerateDenominator { index, value: ai });
                }
                ai.sqrt() / bi
            }
            Transform::InverseQuadratic | Transform::AmGm => {
                for v in [ai, bi] {
                    if !(v >= DENOMINATOR_FLOOR) {
                        return Err(FpError::DegenerateDenominator { index, value: v });
                    }
                }
                if kind == Transform::InverseQuadratic {
                    bi.sqrt() / ai
                } else {
                    1.0 / (2.0 * ai * bi)
                }
            }
            other => return Err(FpError::WrongKind { expected: "qt, inverse-qt or amgm", got: other.name() }),
        };
        out.push(y);
    }
    Ok(out)
}

#[inline]
pub fn qt_term(y: f64, a: f64, b: f64) -> f64 {
    2.0 * y * a.max(0.0).sqrt() - y * y * b
}

/// `2 y sqrt(B) - y^2 A`, the inverse-QT bracket before clamping.
#[inline]
pub fn inverse_bracket(y: f64, a: f64, b: f64) -> f64 {
    2.0 * y * b.max(0.0).sqrt() - y * y * a
}

/// `-1 / [2 y sqrt(B) - y^2 A]_+`, or `-inf` when the bracket is degenerate.
#[inline]
pub fn inverse_qt_term(y: f64, a: f64, b: f64) -> f64 {
    let h = inverse_bracket(y, a, b);
    if h < BRACKET_FLOOR {
        f64::NEG_INFINITY
    } else {
        -1.0 / h
    }
}

#[inline]
pub fn amgm_term(y: f64, a: f64, b: f64) -> f64 {
    -(y * a * a + 1.0 / (4.0 * y * b * b))
}

/// Weighted surrogate. The QT form lower-bounds `sum w A/B`; the inverse-QT
/// and AM-GM forms lower-bound `-sum w A/B`. Each is exact at the auxiliaries
/// returned by [`update_auxiliaries`].
pub fn surrogate_value(kind: Transform, a: &[f64], b: &[f64], aux: &[f64], weights: &[f64]) -> Result<f64> {
    check_lengths(a, b)?;
    if aux.len() != a.len() || weights.len() != a.len() {
        return Err(FpError::ShapeMismatch("auxiliaries and weights must match the ratio count".into()));
    }
    let term: fn(f64, f64, f64) -> f64 = match kind {
        Transform::Quadratic => qt_term,
        Transform::InverseQuadratic => inverse_qt_term,
        Transform::AmGm => amgm_term,
        other => return Err(FpError::WrongKind { expected: "qt, inverse-qt or amgm", got: other.name() }),
    };
    Ok((0..a.len()).map(|i| weights[i] * term(aux[i], a[i], b[i])).sum())
}

fn warn_curvature(problem: &FPProblem, wanted: Curvature) {
    if problem.ratios.iter().any(|r| r.curvature != wanted) {
        log::warn!("ratio curvature differs from {wanted:?}; the global-optimality guarantee does not apply");
    }
}

fn require_kind(problem: &FPProblem, kinds: &[ProblemKind], expected: &'static str) -> Result<()> {
    if kinds.contains(&problem.kind) {
        Ok(())
    } else {
        Err(FpError::WrongKind { expected, got: problem.kind.name() })
    }
}

fn start_point(problem: &FPProblem, x0: &[f64]) -> Result<Vec<f64>> {
    if x0.len() != problem.dimension {
        return Err(FpError::ShapeMismatch(format!("x0 has length {}, expected {}", x0.len(), problem.dimension)));
    }
    project(&problem.constraint, x0)
}

/// One Dinkelbach step: maximize `A(x) - y B(x)` from `x_start`, then
/// return the maximizer and the updated `y = A/B` there.
pub fn dinkelbach_step(problem: &FPProblem, y: f64, x_start: &[f64], inner: &dyn InnerSolver) -> Result<(Vec<f64>, f64)> {
    let r = &problem.ratios[0];
    let f = |x: &[f64]| r.a(x) - y * r.b(x);
    let g = |x: &[f64]| {
        let (ga, gb) = (r.grad_a(x), r.grad_b(x));
        ga.iter().zip(&gb).map(|(p, q)| p - y * q).collect::<Vec<_>>()
    };
    let x = inner.maximize(&f, &g, &problem.constraint, x_start)?;
    let b = r.b(&x);
    if !(b >= DENOMINATOR_FLOOR) {
        return Err(FpError::DegenerateDenominator { index: 0, value: b });
    }
    Ok((x.clone(), r.a(&x) / b))
}

/// Dinkelbach's method for a single ratio. The trace's surrogate column holds
/// `A(x) - y B(x)` at the new iterate and the auxiliary column holds `y`.
pub fn dinkelbach_solve(problem: &FPProblem, x0: &[f64], inner: &dyn InnerSolver, config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    require_kind(problem, &[ProblemKind::Single], "single")?;
    warn_curvature(problem, Curvature::ConcaveConvex);
    let w = problem.weights[0];
    let r = &problem.ratios[0];
    let mut x = start_point(problem, x0)?;
    let mut y = evaluate_objective(problem, &x)? / w;
    let mut rec = Recorder::new(Sense::Maximize, Transform::Dinkelbach);
    rec.push(w * y, 0.0, y.abs());
    let mut status = Status::MaxIters;
    for _ in 0..config.max_iters {
        let (xn, yn) = match dinkelbach_step(problem, y, &x, inner) {
            Ok(v) => v,
            Err(FpError::DegenerateDenominator { .. }) => {
                status = Status::Degenerate;
                break;
            }
            Err(e) => return Err(e),
        };
        let gap = r.a(&xn) - y * r.b(&xn);
        rec.push(w * yn, w * gap, yn.abs());
        x = xn;
        y = yn;
        if rec.settled(config.obj_tol) || gap <= config.obj_tol {
            status = Status::Converged;
            break;
        }
    }
    Ok(Solution { value: w * y, x, trace: rec.finish(status) })
}

/// Smoothed minimum `-tau ln sum exp(-g_i / tau)` and its softmin weights.
fn soft_min(g: &[f64], tau: f64) -> (f64, Vec<f64>) {
    let m = g.iter().copied().fold(f64::INFINITY, f64::min);
    let e: Vec<f64> = g.iter().map(|v| (-(v - m) / tau).exp()).collect();
    let s: f64 = e.iter().sum();
    (m - tau * s.ln(), e.into_iter().map(|v| v / s).collect())
}

/// Generalized Dinkelbach for `max_x min_i A_i(x)/B_i(x)`.
///
/// The inner problem `max_x min_i (A_i - y B_i)` is nonsmooth, so it is solved
/// by a log-sum-exp continuation with temperatures from `1e-2` down to `1e-9`
/// (relative to the spread of the terms). The step is kept only if it does
/// not lower the exact inner objective.
pub fn maxmin_dinkelbach_solve(
    problem: &FPProblem,
    x0: &[f64],
    inner: &dyn InnerSolver,
    config: &SolverConfig,
) -> Result<Solution> {
    config.validate()?;
    require_kind(problem, &[ProblemKind::MaxMin], "max-min")?;
    warn_curvature(problem, Curvature::ConcaveConvex);
    let mut x = start_point(problem, x0)?;
    let mut y = evaluate_objective(problem, &x)?;
    let mut rec = Recorder::new(Sense::Maximize, Transform::Dinkelbach);
    rec.push(y, 0.0, y.abs());
    let mut status = Status::MaxIters;
    let gaps = |x: &[f64], y: f64| -> Vec<f64> { problem.ratios.iter().map(|r| r.a(x) - y * r.b(x)).collect() };
    for _ in 0..config.max_iters {
        let scale = gaps(&x, y).iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut cand = x.clone();
        for stage in 2..=9 {
            let tau = scale * 10f64.powi(-stage);
            let f = |z: &[f64]| soft_min(&gaps(z, y), tau).0;
            let g = |z: &[f64]| {
                let (_, pi) = soft_min(&gaps(z, y), tau);
                let mut out = vec![0.0; z.len()];
                for (p, r) in pi.iter().zip(&problem.ratios) {
                    if *p < 1e-300 {
                        continue;
                    }
                    let (ga, gb) = (r.grad_a(z), r.grad_b(z));
                    for d in 0..z.len() {
                        out[d] += p * (ga[d] - y * gb[d]);
                    }
                }
                out
            };
            cand = inner.maximize(&f, &g, &problem.constraint, &cand)?;
        }
        let exact = |z: &[f64]| gaps(z, y).into_iter().fold(f64::INFINITY, f64::min);
        let gap = exact(&cand);
        if gap < exact(&x) {
            status = Status::Converged;
            break;
        }
        let yn = match evaluate_objective(problem, &cand) {
            Ok(v) => v,
            Err(FpError::DegenerateDenominator { .. }) => {
                status = Status::Degenerate;
                break;
            }
            Err(e) => return Err(e),
        };
        if yn < y {
            status = Status::Converged;
            break;
        }
        rec.push(yn, gap, yn.abs());
        x = cand;
        y = yn;
        if rec.settled(config.obj_tol) || gap <= config.obj_tol {
            status = Status::Converged;
            break;
        }
    }
    Ok(Solution { value: y, x, trace: rec.finish(status) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Branch {
    /// Quadratic transform inside a nondecreasing outer function.
    Plus,
    /// Inverse quadratic transform inside a nonincreasing outer function.
    Minus,
    /// AM-GM transform of a minimized ratio.
    AmGm,
}

struct UnifiedModel<'a> {
    problem: &'a FPProblem,
    branches: Vec<Branch>,
    outer: Vec<OuterFunction>,
    sense: Sense,
}

impl<'a> UnifiedModel<'a> {
    fn new(problem: &'a FPProblem, variant: Transform) -> Result<Self> {
        let n = problem.ratios.len();
        let (branches, outer, sense) = match problem.kind {
            ProblemKind::Single | ProblemKind::SumMax => {
                warn_curvature(problem, Curvature::ConcaveConvex);
                (vec![Branch::Plus; n], vec![OuterFunction::identity(); n], Sense::Maximize)
            }
            ProblemKind::LogRatio => {
                warn_curvature(problem, Curvature::ConcaveConvex);
                (vec![Branch::Plus; n], vec![OuterFunction::log1p(); n], Sense::Maximize)
            }
            ProblemKind::SumMin => {
                warn_curvature(problem, Curvature::ConvexConcave);
                let b = if variant == Transform::AmGm { Branch::AmGm } else { Branch::Minus };
                (vec![b; n], vec![OuterFunction::negated_identity(); n], Sense::Minimize)
            }
            ProblemKind::SumOfFunctions => {
                let outer = problem.outer.clone().expect("checked at construction");
                let branches: Vec<Branch> = outer
                    .iter()
                    .zip(&problem.ratios)
                    .map(|(f, r)| {
                        let (b, want) = if f.is_nondecreasing() {
                            (Branch::Plus, Curvature::ConcaveConvex)
                        } else {
                            (Branch::Minus, Curvature::ConvexConcave)
                        };
                        if r.curvature != want {
                            log::warn!("ratio curvature differs from {want:?}; the convergence guarantee does not apply");
                        }
                        b
                    })
                    .collect();
                (branches, outer, Sense::Maximize)
            }
            ProblemKind::MaxMin => {
                return Err(FpError::WrongKind { expected: "single, sum-max, sum-min, sum-of-functions or log-ratio", got: "max-min" })
            }
        };
        Ok(Self { problem, branches, outer, sense })
    }

    fn aux(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (a, b) = self.problem.parts(x)?;
        let mut out = Vec::with_capacity(a.len());
        for (i, br) in self.branches.iter().enumerate() {
            let kind = match br {
                Branch::Plus => Transform::Quadratic,
                Branch::Minus => Transform::InverseQuadratic,
                Branch::AmGm => Transform::AmGm,
            };
            let y = update_auxiliaries(kind, &a[i..=i], &b[i..=i]).map_err(|e| match e {
                FpError::DegenerateDenominator { value, .. } => FpError::DegenerateDenominator { index: i, value },
                other => other,
            })?;
            out.push(y[0]);
        }
        Ok(out)
    }

    /// Surrogate to be maximized in x; `-inf` where it leaves its domain.
    fn surrogate(&self, x: &[f64], aux: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, r) in self.problem.ratios.iter().enumerate() {
            let w = self.problem.weights[i];
            let (a, b) = (r.a(x), r.b(x));
            let term = match self.branches[i] {
                Branch::Plus => self.outer[i].value(qt_term(aux[i], a, b)),
                Branch::Minus => {
                    let h = inverse_bracket(aux[i], a, b);
                    if h < BRACKET_FLOOR {
                        None
                    } else {
                        self.outer[i].value(1.0 / h)
                    }
                }
                Branch::AmGm => Some(amgm_term(aux[i], a, b)),
            };
            match term {
                Some(v) if v.is_finite() => s += w * v,
                _ => return f64::NEG_INFINITY,
            }
        }
        s
    }

    fn gradient(&self, x: &[f64], aux: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        for (i, r) in self.problem.ratios.iter().enumerate() {
            let w = self.problem.weights[i];
            let y = aux[i];
            let (a, b) = (r.a(x), r.b(x));
            let (ga, gb) = (r.grad_a(x), r.grad_b(x));
            let (ca, cb) = match self.branches[i] {
                Branch::Plus => {
                    let u = qt_term(y, a, b);
                    let d = self.outer[i].derivative(u);
                    (d * y / a.max(1e-300).sqrt(), -d * y * y)
                }
                Branch::Minus => {
                    let h = inverse_bracket(y, a, b).max(BRACKET_FLOOR);
                    let d = -self.outer[i].derivative(1.0 / h) / (h * h);
                    (-d * y * y, d * y / b.max(1e-300).sqrt())
                }
                Branch::AmGm => (-2.0 * y * a, 1.0 / (2.0 * y * b * b * b)),
            };
            for k in 0..g.len() {
                g[k] += w * (ca * ga[k] + cb * gb[k]);
            }
        }
        g
    }

    /// Surrogate reported in the objective's own sense.
    fn reported(&self, s: f64) -> f64 {
        match self.sense {
            Sense::Maximize => s,
            Sense::Minimize => -s,
        }
    }
}

/// Unified quadratic transform: all auxiliaries are refreshed jointly from the
/// current x, then the concave surrogate is maximized once in x.
///
/// Handles single and sum-max (QT), sum-min (inverse QT, or AM-GM when
/// `config.variant` is [`Transform::AmGm`]), sum-of-functions (QT under
/// nondecreasing outer functions, inverse QT under nonincreasing ones) and
/// log-ratio problems (QT under `ln(1 + r)`).
pub fn unified_qt_solve(problem: &FPProblem, x0: &[f64], inner: &dyn InnerSolver, config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    let model = UnifiedModel::new(problem, config.variant)?;
    let variant = match (problem.kind, config.variant) {
        (ProblemKind::SumMin, Transform::AmGm) => Transform::AmGm,
        (ProblemKind::SumMin, _) => Transform::InverseQuadratic,
        _ => Transform::Quadratic,
    };
    let mut x = start_point(problem, x0)?;
    let mut f = evaluate_objective(problem, &x)?;
    let mut rec = Recorder::new(model.sense, variant);
    rec.push(f, f, 0.0);
    let mut status = Status::MaxIters;
    let mut sentinels = 0usize;
    for _ in 0..config.max_iters {
        let aux = match model.aux(&x) {
            Ok(a) => a,
            Err(FpError::DegenerateDenominator { .. }) => {
                status = Status::Degenerate;
                break;
            }
            Err(e) => return Err(e),
        };
        if !model.surrogate(&x, &aux).is_finite() {
            sentinels += 1;
            if sentinels > config.max_iters {
                status = Status::Degenerate;
                break;
            }
            continue;
        }
        let sf = |z: &[f64]| model.surrogate(z, &aux);
        let sg = |z: &[f64]| model.gradient(z, &aux);
        let xn = inner.maximize(&sf, &sg, &problem.constraint, &x)?;
        let fnew = match evaluate_objective(problem, &xn) {
            Ok(v) => v,
            Err(FpError::DegenerateDenominator { .. } | FpError::DomainError { .. }) => {
                status = Status::Degenerate;
                break;
            }
            Err(e) => return Err(e),
        };
        rec.push(fnew, model.reported(model.surrogate(&xn, &aux)), l2(&aux));
        x = xn;
        f = fnew;
        if rec.settled(config.obj_tol) {
            status = Status::Converged;
            break;
        }
    }
    if status == Status::MaxIters && sentinels > config.max_iters {
        status = Status::Degenerate;
    }
    Ok(Solution { x, value: f, trace: rec.finish(status) })
}

/// Unified-QT surrogate `g(x | x_hat)` with every auxiliary fixed at its
/// optimum for `x_hat`, reported in the objective's own sense: a lower bound
/// for maximization, an upper bound for minimization, exact at `x = x_hat`.
pub fn unified_surrogate(problem: &FPProblem, x: &[f64], x_hat: &[f64], variant: Transform) -> Result<f64> {
    let model = UnifiedModel::new(problem, variant)?;
    let aux = model.aux(x_hat)?;
    Ok(model.reported(model.surrogate(x, &aux)))
}

/// Charnes-Cooper variables `z = 1/B(x)`, `q = x/B(x)` for a single ratio.
///
/// The lifted objective is `z A(q/z)` and the lifted constraint
/// `z B(q/z) <= 1`. Only evaluators and the lift/recover maps are provided.
#[derive(Debug, Clone)]
pub struct LiftedProblem {
    source: FPProblem,
}

pub fn charnes_cooper_lift(problem: &FPProblem) -> Result<LiftedProblem> {
    require_kind(problem, &[ProblemKind::Single], "single")?;
    Ok(LiftedProblem { source: problem.clone() })
}

impl LiftedProblem {
    pub fn lift(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let b = self.source.ratios[0].b(x);
        if !(b >= DENOMINATOR_FLOOR) {
            return Err(FpError::DegenerateDenominator { index: 0, value: b });
        }
        Ok((1.0 / b, x.iter().map(|v| v / b).collect()))
    }

    pub fn recover(&self, z: f64, q: &[f64]) -> Result<Vec<f64>> {
        if !(z > 0.0) {
            return Err(FpError::DomainError { index: 0, value: z });
        }
        Ok(q.iter().map(|v| v / z).collect())
    }

    /// `z A(q/z)`, weighted like the source problem.
    pub fn objective(&self, z: f64, q: &[f64]) -> Result<f64> {
        let x = self.recover(z, q)?;
        Ok(self.source.weights[0] * z * self.source.ratios[0].a(&x))
    }

    /// `z B(q/z)`; the lifted point is feasible when this is at most one.
    pub fn constraint(&self, z: f64, q: &[f64]) -> Result<f64> {
        let x = self.recover(z, q)?;
        Ok(z * self.source.ratios[0].b(&x))
    }

    pub fn is_feasible(&self, z: f64, q: &[f64], tol: f64) -> bool {
        match (self.recover(z, q), self.constraint(z, q)) {
            (Ok(x), Ok(c)) => c <= 1.0 + tol && self.source.constraint.contains(&x, tol),
            _ => false,
        }
    }

    pub fn source(&self) -> &FPProblem {
        &self.source
    }
}

/// Convenience: the constraint set of the source problem.
pub fn lifted_source_set(lift: &LiftedProblem) -> &ConstraintSet {
    &lift.source.constraint
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::{grid_oracle, GoldenSection, ProjectedGradient};
    use crate::problem::RatioSpec;
    use std::f64::consts::E;

    fn x_over_quadratic() -> FPProblem {
        let r = RatioSpec::new(|x| x[0], |_| vec![1.0], |x| x[0] * x[0] + 1.0, |x| vec![2.0 * x[0]], Curvature::ConcaveConvex);
        FPProblem::new(ProblemKind::Single, vec![r], ConstraintSet::uniform_box(1, 0.0, 2.0)).unwrap()
    }

    fn ee_problem(p_max: f64) -> FPProblem {
        let r = RatioSpec::new(
            |x| x[0].ln_1p(),
            |x| vec![1.0 / (1.0 + x[0])],
            |x| x[0] + 1.0,
            |_| vec![1.0],
            Curvature::ConcaveConvex,
        );
        FPProblem::new(ProblemKind::Single, vec![r], ConstraintSet::uniform_box(1, 0.0, p_max)).unwrap()
    }

    #[test]
    fn auxiliary_closed_forms() {
        assert_eq!(update_auxiliaries(Transform::Quadratic, &[9.0], &[3.0]).unwrap(), vec![1.0]);
        assert_eq!(update_auxiliaries(Transform::InverseQuadratic, &[2.0], &[4.0]).unwrap(), vec![1.0]);
        assert_eq!(update_auxiliaries(Transform::AmGm, &[1.0], &[2.0]).unwrap(), vec![0.25]);
        assert!(matches!(
            update_auxiliaries(Transform::Quadratic, &[1.0], &[0.0]),
            Err(FpError::DegenerateDenominator { index: 0, .. })
        ));
        assert!(update_auxiliaries(Transform::InverseQuadratic, &[0.0], &[1.0]).is_err());
    }

    #[test]
    fn surrogate_examples() {
        assert_eq!(surrogate_value(Transform::Quadratic, &[9.0], &[3.0], &[1.0], &[1.0]).unwrap(), 3.0);
        assert_eq!(surrogate_value(Transform::InverseQuadratic, &[2.0], &[4.0], &[1.0], &[1.0]).unwrap(), -0.5);
        assert_eq!(surrogate_value(Transform::AmGm, &[1.0], &[2.0], &[0.25], &[1.0]).unwrap(), -0.5);
        // Bracket 2*1*1 - 1*3 < 0.
        assert_eq!(surrogate_value(Transform::InverseQuadratic, &[3.0], &[1.0], &[1.0], &[1.0]).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn dinkelbach_x_over_quadratic() {
        let p = x_over_quadratic();
        let s = dinkelbach_solve(&p, &[0.3], &ProjectedGradient::default(), &SolverConfig::default()).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-4, "{:?}", s.x);
        assert!((s.value - 0.5).abs() < 1e-8);
        assert!(s.trace.is_monotone(1e-10));
        assert_eq!(s.trace.status, Status::Converged);
    }

    #[test]
    fn dinkelbach_first_step_from_zero() {
        let p = x_over_quadratic();
        let (x, y) = dinkelbach_step(&p, 0.0, &[0.5], &ProjectedGradient::default()).unwrap();
        assert_eq!(x, vec![2.0]);
        assert!((y - 0.4).abs() < 1e-15);
    }

    #[test]
    fn energy_efficiency_example() {
        let s = dinkelbach_solve(&ee_problem(10.0), &[5.0], &GoldenSection::default(), &SolverConfig::default()).unwrap();
        assert!((s.x[0] - (E - 1.0)).abs() < 1e-5);
        assert!((s.value - 1.0 / E).abs() < 1e-10);
        let s = dinkelbach_solve(&ee_problem(0.5), &[0.1], &GoldenSection::default(), &SolverConfig::default()).unwrap();
        assert!((s.x[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn maxmin_symmetric_pair() {
        let up = RatioSpec::new(|x| x[0], |_| vec![1.0], |_| 1.0, |_| vec![0.0], Curvature::ConcaveConvex);
        let down = RatioSpec::new(|x| 2.0 - x[0], |_| vec![-1.0], |_| 1.0, |_| vec![0.0], Curvature::ConcaveConvex);
        let p = FPProblem::new(ProblemKind::MaxMin, vec![up, down], ConstraintSet::uniform_box(1, 0.0, 2.0)).unwrap();
        let s = maxmin_dinkelbach_solve(&p, &[0.2], &ProjectedGradient::default(), &SolverConfig::default()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-7, "{}", s.value);
        assert!(s.trace.is_monotone(1e-10));
    }

    #[test]
    fn maxmin_random_linear_matches_grid() {
        // Frozen instance: ratios (c_i . x + d_i) / (e_i . x + 1) on [0,1]^2.
        let c = [[1.0, 0.2], [0.1, 0.9], [-0.5, -0.4]];
        let d = [0.1, 0.2, 1.2];
        let e = [[0.3, 0.1], [0.2, 0.5], [0.1, 0.1]];
        let ratios: Vec<RatioSpec> = (0..3)
            .map(|i| {
                let (ci, di, ei) = (c[i], d[i], e[i]);
                RatioSpec::new(
                    move |x| ci[0] * x[0] + ci[1] * x[1] + di,
                    move |_| ci.to_vec(),
                    move |x| ei[0] * x[0] + ei[1] * x[1] + 1.0,
                    move |_| ei.to_vec(),
                    Curvature::ConcaveConvex,
                )
            })
            .collect();
        let p = FPProblem::new(ProblemKind::MaxMin, ratios, ConstraintSet::uniform_box(2, 0.0, 1.0)).unwrap();
        let s = maxmin_dinkelbach_solve(&p, &[0.5, 0.5], &ProjectedGradient::default(), &SolverConfig::default()).unwrap();
        let coarse = grid_oracle(&p, 1e-3, &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!(s.value >= coarse.best_value - 1e-9);
        // The kink makes a 1e-3 grid lose about 2e-4; zoom in around the coarse winner.
        let zoom: Vec<(f64, f64)> = coarse.best_x.iter().map(|v| ((v - 2e-3).max(0.0), (v + 2e-3).min(1.0))).collect();
        let fine = grid_oracle(&p, 2e-6, &zoom).unwrap();
        assert!((s.value - fine.best_value).abs() < 1e-4, "{} vs {}", s.value, fine.best_value);
    }

    #[test]
    fn unified_sum_max_agrees_with_dinkelbach() {
        let p = x_over_quadratic();
        let cfg = SolverConfig::default().with_obj_tol(1e-13).with_max_iters(5000);
        let q = unified_qt_solve(&p, &[0.3], &ProjectedGradient::default(), &cfg).unwrap();
        let d = dinkelbach_solve(&p, &[0.3], &ProjectedGradient::default(), &cfg).unwrap();
        assert!((q.value - d.value).abs() < 1e-6);
        assert!(q.trace.is_monotone(1e-10));
    }

    #[test]
    fn unified_single_cell_secrecy_hits_cap() {
        // f+ = ln(1 + 10p), f- = ln(1 - r) on r = 0.5p / (0.5p + 1).
        let plus = RatioSpec::new(|x| 10.0 * x[0], |_| vec![10.0], |_| 1.0, |_| vec![0.0], Curvature::ConcaveConvex);
        let minus = RatioSpec::new(|x| 0.5 * x[0], |_| vec![0.5], |x| 0.5 * x[0] + 1.0, |_| vec![0.5], Curvature::ConvexConcave);
        let p = FPProblem::new(ProblemKind::SumOfFunctions, vec![plus, minus], ConstraintSet::uniform_box(1, 0.0, 10.0));
        assert!(p.is_err());
        let p = FPProblem::new(ProblemKind::SumMax, vec![
            RatioSpec::new(|x| 10.0 * x[0], |_| vec![10.0], |_| 1.0, |_| vec![0.0], Curvature::ConcaveConvex),
            RatioSpec::new(|x| 0.5 * x[0], |_| vec![0.5], |x| 0.5 * x[0] + 1.0, |_| vec![0.5], Curvature::ConvexConcave),
        ], ConstraintSet::uniform_box(1, 0.0, 10.0))
        .unwrap()
        .with_outer(vec![OuterFunction::log1p(), OuterFunction::log_one_minus()])
        .unwrap();
        let p = FPProblem { kind: ProblemKind::SumOfFunctions, ..p };
        let s = unified_qt_solve(&p, &[1.0], &ProjectedGradient::default(), &SolverConfig::default()).unwrap();
        assert!((s.x[0] - 10.0).abs() < 1e-9, "{:?}", s.x);
        assert!(s.trace.is_monotone(1e-10));
    }

    #[test]
    fn unified_sum_min_single_source_aoi() {
        // K = 1, mu = 1: (rho^2 + 3 rho + 1)/(1 + rho) at rho-hat = 0 gives 1, plus 1/rho.
        let r1 = RatioSpec::new(|_| 1.0, |_| vec![0.0], |_| 1.0, |_| vec![0.0], Curvature::ConvexConcave);
        let r2 = RatioSpec::new(|_| 1.0, |_| vec![0.0], |x| x[0], |_| vec![1.0], Curvature::ConvexConcave);
        let p = FPProblem::new(ProblemKind::SumMin, vec![r1, r2], ConstraintSet::uniform_box(1, 0.0, 1.0)).unwrap();
        for variant in [Transform::InverseQuadratic, Transform::AmGm] {
            let cfg = SolverConfig::default().with_variant(variant);
            let s = unified_qt_solve(&p, &[0.5], &ProjectedGradient::default(), &cfg).unwrap();
            assert!((s.x[0] - 1.0).abs() < 1e-9);
            assert!((s.value - 2.0).abs() < 1e-9);
            assert!(s.trace.is_monotone(1e-10));
            assert_eq!(s.trace.sense, Sense::Minimize);
        }
    }

    #[test]
    fn lift_round_trip_and_boundary() {
        let r = RatioSpec::new(|x| x[0], |_| vec![1.0], |x| x[0] + 1.0, |_| vec![1.0], Curvature::ConcaveConvex);
        let p = FPProblem::new(ProblemKind::Single, vec![r], ConstraintSet::uniform_box(1, 0.0, 5.0)).unwrap();
        let lift = charnes_cooper_lift(&p).unwrap();
        let (z, q) = lift.lift(&[1.0]).unwrap();
        assert_eq!((z, q[0]), (0.5, 0.5));
        assert_eq!(lift.recover(z, &q).unwrap(), vec![1.0]);
        assert!(matches!(lift.constraint(0.0, &[0.3]), Err(FpError::DomainError { .. })));
        assert!(!lift.is_feasible(0.0, &[0.3], 0.0));
    }

    #[test]
    fn wrong_kind_rejected() {
        let p = x_over_quadratic();
        let p = FPProblem { kind: ProblemKind::SumMax, ..p };
        assert!(matches!(
            dinkelbach_solve(&p, &[1.0], &ProjectedGradient::default(), &SolverConfig::default()),
            Err(FpError::WrongKind { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn auxiliaries_maximize_single_term(a in 0.01f64..100.0, b in 0.01f64..100.0) {
                let cases = [
                    (Transform::Quadratic, 1.0),
                    (Transform::InverseQuadratic, 1.0),
                    (Transform::AmGm, 1.0),
                ];
                for (kind, _) in cases {
                    let y = update_auxiliaries(kind, &[a], &[b]).unwrap()[0];
                    let best = surrogate_value(kind, &[a], &[b], &[y], &[1.0]).unwrap();
                    for k in 1..2000 {
                        let cand = y * (k as f64 / 1000.0);
                        let v = surrogate_value(kind, &[a], &[b], &[cand], &[1.0]).unwrap();
                        prop_assert!(v <= best + 1e-6 * (1.0 + best.abs()), "{kind:?} y={y} cand={cand}");
                    }
                }
            }

            #[test]
            fn amgm_equality(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
                let y = update_auxiliaries(Transform::AmGm, &[a], &[b]).unwrap()[0];
                let lhs = y * a * a;
                let rhs = 1.0 / (4.0 * y * b * b);
                prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
            }

            #[test]
            fn exact_at_optimal_auxiliaries(a in 0.01f64..100.0, b in 0.01f64..100.0, w in 0.1f64..5.0) {
                let r = a / b;
                let y = update_auxiliaries(Transform::Quadratic, &[a], &[b]).unwrap();
                prop_assert!((surrogate_value(Transform::Quadratic, &[a], &[b], &y, &[w]).unwrap() - w * r).abs() <= 1e-12 * (1.0 + w * r));
                for kind in [Transform::InverseQuadratic, Transform::AmGm] {
                    let y = update_auxiliaries(kind, &[a], &[b]).unwrap();
                    let s = surrogate_value(kind, &[a], &[b], &y, &[w]).unwrap();
                    prop_assert!((s + w * r).abs() <= 1e-12 * (1.0 + w * r));
                }
            }
        }
    }
}
