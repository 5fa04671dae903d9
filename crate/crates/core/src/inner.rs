//! Inner-step machinery: projections, projected gradient ascent, golden
//! section search, assignment argmax and brute-force oracles.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{FpError, Result};
use crate::problem::{evaluate_objective, ConstraintSet, FPProblem, Sense};

/// Maximizes a (caller-guaranteed concave) function over a constraint set.
///
/// Implementations never return a point worse than the projection of `x0`,
/// which is what makes the outer MM loops monotone.
pub trait InnerSolver: Send + Sync {
    fn maximize(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        grad: &dyn Fn(&[f64]) -> Vec<f64>,
        set: &ConstraintSet,
        x0: &[f64],
    ) -> Result<Vec<f64>>;
}

/// Projected gradient ascent with Armijo backtracking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedGradient {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for ProjectedGradient {
    fn default() -> Self {
        Self { tol: 1e-10, max_iters: 20_000 }
    }
}

const ARMIJO: f64 = 1e-4;

impl ProjectedGradient {
    pub fn new(tol: f64, max_iters: usize) -> Self {
        Self { tol, max_iters }
    }

    /// Returns the final point and whether the residual target was met.
    fn run(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        grad: &dyn Fn(&[f64]) -> Vec<f64>,
        set: &ConstraintSet,
        x0: &[f64],
    ) -> Result<(Vec<f64>, bool)> {
        let mut x = project(set, x0)?;
        let mut fx = f(&x);
        if !fx.is_finite() {
            return Err(FpError::InnerSolverFailure(format!("objective is {fx} at the starting point")));
        }
        let mut step = 1.0;
        for _ in 0..self.max_iters {
            let g = grad(&x);
            let full: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + b).collect();
            let target = project(set, &full)?;
            if dist(&x, &target) <= self.tol {
                return Ok((x, true));
            }
            loop {
                let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
                let xn = project(set, &trial)?;
                let fnew = f(&xn);
                let gain: f64 = g.iter().zip(xn.iter().zip(&x)).map(|(gi, (a, b))| gi * (a - b)).sum();
                if fnew.is_finite() && fnew >= fx + ARMIJO * gain {
                    let moved = dist(&x, &xn);
                    x = xn;
                    fx = fnew;
                    step *= 2.0;
                    if moved == 0.0 {
                        return Ok((x, true));
                    }
                    break;
                }
                step *= 0.5;
                if step < 1e-30 {
                    // No representable ascent step remains.
                    return Ok((x, true));
                }
            }
        }
        Ok((x, false))
    }
}

impl InnerSolver for ProjectedGradient {
    fn maximize(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        grad: &dyn Fn(&[f64]) -> Vec<f64>,
        set: &ConstraintSet,
        x0: &[f64],
    ) -> Result<Vec<f64>> {
        let (x, converged) = self.run(f, grad, set, x0)?;
        if !converged {
            log::debug!("projected gradient stopped at its iteration cap");
        }
        Ok(x)
    }
}

/// Projected gradient ascent that fails when the iteration cap is hit before
/// the residual `||x - P(x + grad f(x))||` reaches `tol`.
pub fn projected_gradient_max(
    f: &dyn Fn(&[f64]) -> f64,
    grad: &dyn Fn(&[f64]) -> Vec<f64>,
    set: &ConstraintSet,
    x0: &[f64],
    tol: f64,
    max_iters: usize,
) -> Result<Vec<f64>> {
    let (x, converged) = ProjectedGradient::new(tol, max_iters).run(f, grad, set, x0)?;
    if converged {
        Ok(x)
    } else {
        Err(FpError::InnerSolverFailure(format!("no convergence within {max_iters} iterations")))
    }
}

/// Golden-section search for one-dimensional boxes. The gradient is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenSection {
    pub tol: f64,
}

impl Default for GoldenSection {
    fn default() -> Self {
        Self { tol: 1e-12 }
    }
}

impl InnerSolver for GoldenSection {
    fn maximize(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        _grad: &dyn Fn(&[f64]) -> Vec<f64>,
        set: &ConstraintSet,
        x0: &[f64],
    ) -> Result<Vec<f64>> {
        let ConstraintSet::Box { lower, upper } = set else {
            return Err(FpError::UnsupportedSet(set.name()));
        };
        if lower.len() != 1 || !lower[0].is_finite() || !upper[0].is_finite() {
            return Err(FpError::UnsupportedSet("golden section needs a finite one-dimensional box"));
        }
        let g = |t: f64| f(&[t]);
        let start = x0.first().copied().unwrap_or(lower[0]).clamp(lower[0], upper[0]);
        let found = golden_section_max(&g, lower[0], upper[0], self.tol);
        let best = [found, lower[0], upper[0], start]
            .into_iter()
            .map(|t| (t, g(t)))
            .filter(|(_, v)| !v.is_nan())
            .fold((start, f64::NEG_INFINITY), |acc, (t, v)| if v > acc.1 { (t, v) } else { acc });
        Ok(vec![best.0])
    }
}

/// Golden-section search for the maximizer of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    // Boundary maximizers are only approached asymptotically; snap to them.
    [mid, lo, hi].into_iter().fold(mid, |best, t| if f(t) > f(best) { t } else { best })
}

/// Euclidean projection onto `set`. For discrete assignments this returns
/// the nearest one-hot matrix (row-wise argmax).
pub fn project(set: &ConstraintSet, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != set.dim() {
        return Err(FpError::ShapeMismatch(format!("point of length {} for a set of dimension {}", x.len(), set.dim())));
    }
    Ok(match set {
        ConstraintSet::Box { lower, upper } => {
            x.iter().zip(lower.iter().zip(upper)).map(|(v, (l, u))| v.clamp(*l, *u)).collect()
        }
        ConstraintSet::Ball { radius, .. } => scale_into_ball(x, *radius),
        ConstraintSet::PerColumnBall { rows, radius, .. } => {
            x.chunks(*rows).flat_map(|c| scale_into_ball(c, *radius)).collect()
        }
        ConstraintSet::Simplex { .. } => project_simplex(x),
        ConstraintSet::DiscreteAssignment { n, k } => {
            let scores = DMatrix::from_column_slice(*n, *k, x);
            assignment_argmax(&scores).as_slice().to_vec()
        }
        ConstraintSet::Unconstrained { .. } => x.to_vec(),
        ConstraintSet::Product(parts) => {
            let mut out = Vec::with_capacity(x.len());
            let mut offset = 0;
            for p in parts {
                let d = p.dim();
                out.extend(project(p, &x[offset..offset + d])?);
                offset += d;
            }
            out
        }
    })
}

fn scale_into_ball(x: &[f64], radius: f64) -> Vec<f64> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n <= radius {
        x.to_vec()
    } else {
        x.iter().map(|v| v * radius / n).collect()
    }
}

fn project_simplex(x: &[f64]) -> Vec<f64> {
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &v) in u.iter().enumerate() {
        cumsum += v;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    x.iter().map(|v| (v - theta).max(0.0)).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Row-wise argmax, ties to the lowest column index.
pub fn row_argmax(scores: &DMatrix<f64>) -> Vec<usize> {
    (0..scores.nrows())
        .map(|i| {
            let mut best = 0;
            for c in 1..scores.ncols() {
                if scores[(i, c)] > scores[(i, best)] {
                    best = c;
                }
            }
            best
        })
        .collect()
}

/// One-hot assignment matrix selecting each row's argmax.
pub fn assignment_argmax(scores: &DMatrix<f64>) -> DMatrix<f64> {
    one_hot(&row_argmax(scores), scores.ncols())
}

pub fn one_hot(labels: &[usize], k: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(labels.len(), k);
    for (i, &c) in labels.iter().enumerate() {
        x[(i, c)] = 1.0;
    }
    x
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
}

/// Largest grid the oracles will sweep.
pub const GRID_BUDGET: usize = 250_000_000;
/// Largest assignment space the enumerator will sweep.
pub const ENUMERATION_BUDGET: usize = 1 << 20;

fn better(sense: Sense, a: f64, b: f64) -> bool {
    match sense {
        Sense::Maximize => a > b,
        Sense::Minimize => a < b,
    }
}

/// Exhaustive search over a uniform grid including both endpoints of every
/// interval. Points where `f` returns `None` are skipped. Ties keep the
/// lexicographically first point, so results do not depend on threading.
pub fn grid_search(
    f: &(dyn Fn(&[f64]) -> Option<f64> + Sync),
    bounds: &[(f64, f64)],
    resolution: f64,
    sense: Sense,
) -> Result<OracleResult> {
    let dim = bounds.len();
    if dim == 0 || dim > 3 {
        return Err(FpError::BudgetExceeded(format!("grid search supports 1 to 3 dimensions, got {dim}")));
    }
    if !(resolution > 0.0) {
        return Err(FpError::InvalidProblem("grid resolution must be positive".into()));
    }
    let counts: Vec<usize> = bounds
        .iter()
        .map(|(lo, hi)| ((hi - lo) / resolution).round().max(0.0) as usize + 1)
        .collect();
    let total = counts.iter().try_fold(1usize, |acc, c| acc.checked_mul(*c)).unwrap_or(usize::MAX);
    if total > GRID_BUDGET {
        return Err(FpError::BudgetExceeded(format!("{total} grid points exceed the budget of {GRID_BUDGET}")));
    }
    let coord = |d: usize, i: usize| -> f64 {
        let (lo, hi) = bounds[d];
        if counts[d] == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (counts[d] - 1) as f64
        }
    };
    let inner: usize = counts[1..].iter().product();
    let best = (0..counts[0])
        .into_par_iter()
        .map(|i0| {
            let mut point = vec![0.0; dim];
            point[0] = coord(0, i0);
            let mut best: Option<(f64, usize)> = None;
            for rest in 0..inner {
                let mut r = rest;
                for d in (1..dim).rev() {
                    point[d] = coord(d, r % counts[d]);
                    r /= counts[d];
                }
                if let Some(v) = f(&point).filter(|v| !v.is_nan()) {
                    if best.map_or(true, |(bv, _)| better(sense, v, bv)) {
                        best = Some((v, i0 * inner + rest));
                    }
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => {
                    if better(sense, y.0, x.0) || (y.0 == x.0 && y.1 < x.1) {
                        Some(y)
                    } else {
                        Some(x)
                    }
                }
                (x, None) => x,
                (None, y) => y,
            },
        );
    let (best_value, flat) = best.ok_or_else(|| FpError::InvalidProblem("no grid point was evaluable".into()))?;
    let mut best_x = vec![0.0; dim];
    let mut r = flat;
    for d in (0..dim).rev() {
        best_x[d] = coord(d, r % counts[d]);
        r /= counts[d];
    }
    Ok(OracleResult { best_x, best_value, evaluations: total })
}

/// Grid oracle for an [`FPProblem`]: sweeps `bounds`, skipping infeasible or
/// non-evaluable points, and reports `evaluate_objective` at the best point.
pub fn grid_oracle(problem: &FPProblem, resolution: f64, bounds: &[(f64, f64)]) -> Result<OracleResult> {
    if problem.dimension > 3 {
        return Err(FpError::BudgetExceeded(format!("grid oracle supports dimension <= 3, got {}", problem.dimension)));
    }
    if bounds.len() != problem.dimension {
        return Err(FpError::ShapeMismatch(format!("{} bounds for dimension {}", bounds.len(), problem.dimension)));
    }
    let f = |x: &[f64]| -> Option<f64> {
        if !problem.constraint.contains(x, 1e-12) {
            return None;
        }
        evaluate_objective(problem, x).ok()
    };
    let mut res = grid_search(&f, bounds, resolution, problem.sense())?;
    res.best_value = evaluate_objective(problem, &res.best_x)?;
    Ok(res)
}

/// Enumerates every labelling of `n` points into `k` clusters and returns
/// the best labels with their value. Labellings where `f` is `None` are skipped.
pub fn enumerate_assignments(
    n: usize,
    k: usize,
    f: &(dyn Fn(&[usize]) -> Option<f64> + Sync),
    sense: Sense,
) -> Result<(Vec<usize>, f64, usize)> {
    let total = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if k == 0 || total > ENUMERATION_BUDGET as u128 {
        return Err(FpError::BudgetExceeded(format!("{k}^{n} assignments exceed the budget of 2^20")));
    }
    let total = total as usize;
    let decode = |mut code: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let c = code % k;
                code /= k;
                c
            })
            .collect()
    };
    let best = (0..total)
        .into_par_iter()
        .filter_map(|code| f(&decode(code)).filter(|v| !v.is_nan()).map(|v| (v, code)))
        .reduce_with(|a, b| if better(sense, b.0, a.0) || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let (value, code) = best.ok_or_else(|| FpError::InvalidProblem("no assignment was evaluable".into()))?;
    Ok((decode(code), value, total))
}

/// Enumeration oracle for problems over a discrete-assignment set. The
/// returned point is the one-hot matrix flattened column-major.
pub fn enumerate_oracle(problem: &FPProblem) -> Result<OracleResult> {
    let ConstraintSet::DiscreteAssignment { n, k } = problem.constraint else {
        return Err(FpError::UnsupportedSet(problem.constraint.name()));
    };
    let f = |labels: &[usize]| evaluate_objective(problem, one_hot(labels, k).as_slice()).ok();
    let (labels, _, evaluations) = enumerate_assignments(n, k, &f, problem.sense())?;
    let best_x = one_hot(&labels, k).as_slice().to_vec();
    let best_value = evaluate_objective(problem, &best_x)?;
    Ok(OracleResult { best_x, best_value, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Curvature, ProblemKind, RatioSpec};
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn projections() {
        let bx = ConstraintSet::uniform_box(1, 0.0, 10.0);
        assert_eq!(project(&bx, &[12.0]).unwrap(), vec![10.0]);
        let ball = ConstraintSet::Ball { dim: 2, radius: 1.0 };
        let p = project(&ball, &[3.0, 4.0]).unwrap();
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
        let cols = ConstraintSet::PerColumnBall { rows: 2, cols: 2, radius: 2.0 };
        assert_eq!(project(&cols, &[0.0, 4.0, 1.0, 0.0]).unwrap(), vec![0.0, 2.0, 1.0, 0.0]);
        let simplex = ConstraintSet::Simplex { dim: 3 };
        let s = project(&simplex, &[2.0, 0.0, 0.0]).unwrap();
        assert_eq!(s, vec![1.0, 0.0, 0.0]);
        let s = project(&simplex, &[0.5, 0.5, 0.5]).unwrap();
        assert!(s.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn projection_shape_error() {
        assert!(matches!(project(&ConstraintSet::Simplex { dim: 3 }, &[1.0]), Err(FpError::ShapeMismatch(_))));
    }

    #[test]
    fn pg_box_corner() {
        let f = |x: &[f64]| -((x[0] - 5.0).powi(2) + (x[1] - 5.0).powi(2));
        let g = |x: &[f64]| vec![-2.0 * (x[0] - 5.0), -2.0 * (x[1] - 5.0)];
        let x = projected_gradient_max(&f, &g, &ConstraintSet::uniform_box(2, 0.0, 1.0), &[0.2, 0.3], 1e-10, 1000).unwrap();
        assert_eq!(x, vec![1.0, 1.0]);
    }

    #[test]
    fn pg_interior() {
        let f = |x: &[f64]| -x[0] * x[0];
        let g = |x: &[f64]| vec![-2.0 * x[0]];
        let x = projected_gradient_max(&f, &g, &ConstraintSet::uniform_box(1, -1.0, 1.0), &[0.7], 1e-10, 1000).unwrap();
        assert!(x[0].abs() < 1e-10);
    }

    #[test]
    fn pg_ball_matches_projected_unconstrained_argmax() {
        // -||x - c||^2 over the unit ball: argmax is c / ||c||.
        let c = [3.0, -1.0, 2.0];
        let f = |x: &[f64]| -x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let g = |x: &[f64]| x.iter().zip(&c).map(|(a, b)| -2.0 * (a - b)).collect::<Vec<_>>();
        let x = projected_gradient_max(&f, &g, &ConstraintSet::Ball { dim: 3, radius: 1.0 }, &[0.0; 3], 1e-10, 1000).unwrap();
        let n = (14f64).sqrt();
        for i in 0..3 {
            assert!((x[i] - c[i] / n).abs() < 1e-6);
        }
    }

    #[test]
    fn golden_section_cases() {
        let x = golden_section_max(&|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6);
        let x = golden_section_max(&|x: f64| x.ln_1p() / (x + 1.0), 0.0, 10.0, 1e-10);
        assert!((x - (std::f64::consts::E - 1.0)).abs() < 1e-5);
        let x = golden_section_max(&|x| x, 0.0, 2.0, 1e-10);
        assert!((x - 2.0).abs() < 1e-6);
    }

    #[test]
    fn golden_section_never_worse_than_start() {
        // Not unimodal: the search may land in the wrong bump, but never below x0.
        let f = |x: &[f64]| (3.0 * x[0]).sin();
        let x = GoldenSection::default()
            .maximize(&f, &|_| vec![0.0], &ConstraintSet::uniform_box(1, 0.0, 6.0), &[0.5])
            .unwrap();
        assert!(f(&x) >= f(&[0.5]));
    }

    #[test]
    fn argmax_rows_and_ties() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 3.0]);
        assert_eq!(row_argmax(&s), vec![0, 1]);
        let a = assignment_argmax(&s);
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]));
        let tie = DMatrix::from_element(3, 4, 0.7);
        assert_eq!(row_argmax(&tie), vec![0, 0, 0]);
    }

    #[test]
    fn argmax_agrees_with_row_scan() {
        let mut rng = seeded(5);
        let s = DMatrix::from_fn(5, 3, |_, _| rng.random::<f64>());
        let a = assignment_argmax(&s);
        for i in 0..5 {
            let best = (0..3).map(|c| s[(i, c)]).fold(f64::NEG_INFINITY, f64::max);
            let chosen = (0..3).find(|&c| a[(i, c)] == 1.0).unwrap();
            assert_eq!(s[(i, chosen)], best);
            assert_eq!((0..3).map(|c| a[(i, c)]).sum::<f64>(), 1.0);
        }
    }

    fn x_over_quadratic() -> FPProblem {
        let r = RatioSpec::new(|x| x[0], |_| vec![1.0], |x| x[0] * x[0] + 1.0, |x| vec![2.0 * x[0]], Curvature::ConcaveConvex);
        FPProblem::new(ProblemKind::Single, vec![r], ConstraintSet::uniform_box(1, 0.0, 2.0)).unwrap()
    }

    #[test]
    fn grid_oracle_1d() {
        let res = grid_oracle(&x_over_quadratic(), 1e-3, &[(0.0, 2.0)]).unwrap();
        assert!((res.best_x[0] - 1.0).abs() < 1e-9);
        assert_eq!(res.best_value, 0.5);
        assert_eq!(res.evaluations, 2001);
    }

    #[test]
    fn grid_oracle_dimension_guard() {
        let r = RatioSpec::with_finite_differences(|_| 1.0, |_| 1.0, Curvature::Generic);
        let p = FPProblem::new(ProblemKind::Single, vec![r], ConstraintSet::Unconstrained { dim: 4 }).unwrap();
        assert!(matches!(grid_oracle(&p, 1e-3, &[]), Err(FpError::BudgetExceeded(_))));
    }

    #[test]
    fn grid_is_deterministic() {
        let f = |x: &[f64]| Some(-(x[0] - 0.25).abs() - (x[1] + 0.5).abs());
        let a = grid_search(&f, &[(-1.0, 1.0), (-1.0, 1.0)], 0.01, Sense::Maximize).unwrap();
        let b = grid_search(&f, &[(-1.0, 1.0), (-1.0, 1.0)], 0.01, Sense::Maximize).unwrap();
        assert_eq!(a, b);
        assert!((a.best_x[0] - 0.25).abs() < 1e-12 && (a.best_x[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn enumeration_budget() {
        let f = |_: &[usize]| Some(0.0);
        assert!(enumerate_assignments(21, 2, &f, Sense::Minimize).is_err());
        assert_eq!(enumerate_assignments(3, 2, &f, Sense::Minimize).unwrap().2, 8);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn sets() -> Vec<ConstraintSet> {
            vec![
                ConstraintSet::uniform_box(3, -1.0, 2.0),
                ConstraintSet::Ball { dim: 3, radius: 1.5 },
                ConstraintSet::PerColumnBall { rows: 1, cols: 3, radius: 0.5 },
                ConstraintSet::Simplex { dim: 3 },
                ConstraintSet::Unconstrained { dim: 3 },
                ConstraintSet::Product(vec![ConstraintSet::Ball { dim: 2, radius: 1.0 }, ConstraintSet::uniform_box(1, 0.0, 1.0)]),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn idempotent_and_nonexpansive(
                a in proptest::collection::vec(-10.0f64..10.0, 3),
                b in proptest::collection::vec(-10.0f64..10.0, 3),
            ) {
                for set in sets() {
                    let pa = project(&set, &a).unwrap();
                    let pb = project(&set, &b).unwrap();
                    let ppa = project(&set, &pa).unwrap();
                    prop_assert!(dist(&pa, &ppa) <= 1e-12, "{:?}", set);
                    prop_assert!(dist(&pa, &pb) <= dist(&a, &b) + 1e-12, "{:?}", set);
                    prop_assert!(set.contains(&pa, 1e-12));
                }
            }

            #[test]
            fn grid_brackets_true_optimum(c in 0.2f64..1.8, res in 1e-3f64..1e-2) {
                // f(x) = -(x - c)^2 on [0, 2] has Lipschitz constant 4 there.
                let f = |x: &[f64]| Some(-(x[0] - c).powi(2));
                let r = grid_search(&f, &[(0.0, 2.0)], res, Sense::Maximize).unwrap();
                prop_assert!(r.best_value <= 0.0);
                prop_assert!(0.0 <= r.best_value + 4.0 * res);
            }
        }
    }
}
