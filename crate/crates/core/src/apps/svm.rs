//! Hard-margin linear SVM as a max-min-ratios problem:
//! maximize `min_i t_i (w^T x_i + b) / ||w||` over `(w, b)`.
//!
//! The ratios are scale-invariant, so `w` is kept in the unit ball and `b`
//! in `[-R, R]` with `R` the largest point norm; the result is reported with
//! `||w|| = 1`.

use rand::Rng;

use crate::error::{FpError, Result};
use crate::inner::{golden_section_max, grid_search, ProjectedGradient};
use crate::problem::{ConstraintSet, Curvature, FPProblem, ProblemKind, RatioSpec, Sense};
use crate::scalar::maxmin_dinkelbach_solve;
use crate::solver::{SolverConfig, SolverTrace};

/// Margins at or below this are treated as "not separable".
pub const MIN_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SvmSolution {
    /// Unit-norm normal vector.
    pub w: Vec<f64>,
    pub b: f64,
    pub margin: f64,
    pub trace: SolverTrace,
}

fn check(points: &[Vec<f64>], labels: &[f64]) -> Result<usize> {
    if points.is_empty() || points.len() != labels.len() {
        return Err(FpError::ShapeMismatch(format!("{} points with {} labels", points.len(), labels.len())));
    }
    let d = points[0].len();
    if d == 0 || points.iter().any(|p| p.len() != d || p.iter().any(|v| !v.is_finite())) {
        return Err(FpError::InvalidProblem("points must share a positive, finite dimension".into()));
    }
    if labels.iter().any(|t| *t != 1.0 && *t != -1.0) {
        return Err(FpError::InvalidProblem("labels must be +1 or -1".into()));
    }
    if !labels.contains(&1.0) || !labels.contains(&-1.0) {
        return Err(FpError::InvalidProblem("both classes must be present".into()));
    }
    Ok(d)
}

fn offset_bound(points: &[Vec<f64>]) -> f64 {
    points.iter().map(|p| p.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max).max(1.0)
}

/// Signed distances `t_i (w^T x_i + b) / ||w||`.
pub fn signed_distances(points: &[Vec<f64>], labels: &[f64], w: &[f64], b: f64) -> Vec<f64> {
    let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    points.iter().zip(labels).map(|(p, t)| t * (p.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b) / n).collect()
}

/// Margin of the boundary `(w, b)`.
pub fn margin(points: &[Vec<f64>], labels: &[f64], w: &[f64], b: f64) -> f64 {
    signed_distances(points, labels, w, b).into_iter().fold(f64::INFINITY, f64::min)
}

/// Max-min problem over `x = (w, b)`.
pub fn svm_problem(points: &[Vec<f64>], labels: &[f64]) -> Result<FPProblem> {
    let d = check(points, labels)?;
    let r = offset_bound(points);
    let ratios = points
        .iter()
        .zip(labels)
        .map(|(p, &t)| {
            let (pa, pg) = (p.clone(), p.clone());
            RatioSpec::new(
                move |x| t * (pa.iter().zip(x).map(|(a, c)| a * c).sum::<f64>() + x[d]),
                move |_| pg.iter().map(|a| t * a).chain(std::iter::once(t)).collect(),
                move |x| x[..d].iter().map(|v| v * v).sum::<f64>().sqrt(),
                move |x| {
                    let n = x[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
                    let mut g: Vec<f64> = x[..d].iter().map(|v| if n > 0.0 { v / n } else { 0.0 }).collect();
                    g.push(0.0);
                    g
                },
                Curvature::ConcaveConvex,
            )
        })
        .collect();
    let set = ConstraintSet::Product(vec![ConstraintSet::Ball { dim: d, radius: 1.0 }, ConstraintSet::uniform_box(1, -r, r)]);
    FPProblem::new(ProblemKind::MaxMin, ratios, set)
}

/// Start at the bisector of the class means.
fn mean_bisector(points: &[Vec<f64>], labels: &[f64], d: usize) -> Vec<f64> {
    let mean = |cls: f64| {
        let members: Vec<&Vec<f64>> = points.iter().zip(labels).filter(|(_, t)| **t == cls).map(|(p, _)| p).collect();
        (0..d).map(|k| members.iter().map(|p| p[k]).sum::<f64>() / members.len() as f64).collect::<Vec<_>>()
    };
    let (pos, neg) = (mean(1.0), mean(-1.0));
    let mut w: Vec<f64> = pos.iter().zip(&neg).map(|(a, b)| a - b).collect();
    let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        w.iter_mut().for_each(|v| *v /= n);
    } else {
        w[0] = 1.0;
    }
    let mid: f64 = pos.iter().zip(&neg).zip(&w).map(|((a, b), c)| 0.5 * (a + b) * c).sum();
    w.push(-mid);
    w
}

/// Maximum-margin boundary by generalized Dinkelbach.
pub fn solve_svm_margin(points: &[Vec<f64>], labels: &[f64], config: &SolverConfig) -> Result<SvmSolution> {
    let problem = svm_problem(points, labels)?;
    let d = points[0].len();
    let x0 = mean_bisector(points, labels, d);
    let inner = ProjectedGradient::new(config.inner_tol, 20_000);
    let s = maxmin_dinkelbach_solve(&problem, &x0, &inner, config)?;
    let n = s.x[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(n > 0.0) || !(s.value > MIN_MARGIN) {
        return Err(FpError::NotSeparable);
    }
    let w: Vec<f64> = s.x[..d].iter().map(|v| v / n).collect();
    let b = s.x[d] / n;
    Ok(SvmSolution { margin: margin(points, labels, &w, b), w, b, trace: s.trace })
}

/// Grid over the boundary angle and offset for 2-D data, `w = (cos theta, sin theta)`.
pub fn svm_grid_oracle(points: &[Vec<f64>], labels: &[f64], resolution: f64) -> Result<(Vec<f64>, f64, f64)> {
    if check(points, labels)? != 2 {
        return Err(FpError::InvalidProblem("the angle grid needs 2-D points".into()));
    }
    let r = offset_bound(points);
    let f = |z: &[f64]| Some(margin(points, labels, &[z[0].cos(), z[0].sin()], z[1]));
    let res = grid_search(&f, &[(0.0, std::f64::consts::TAU), (-r, r)], resolution, Sense::Maximize)?;
    let w = vec![res.best_x[0].cos(), res.best_x[0].sin()];
    Ok((w, res.best_x[1], res.best_value))
}

/// Best margin along the direction `w`, with the offset chosen optimally:
/// half the gap between the projected classes.
pub fn directional_margin(points: &[Vec<f64>], labels: &[f64], w: &[f64]) -> (f64, f64) {
    let (mut lo_pos, mut hi_neg) = (f64::INFINITY, f64::NEG_INFINITY);
    for (p, t) in points.iter().zip(labels) {
        let s: f64 = p.iter().zip(w).map(|(a, c)| a * c).sum();
        if *t > 0.0 {
            lo_pos = lo_pos.min(s);
        } else {
            hi_neg = hi_neg.max(s);
        }
    }
    let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    (0.5 * (lo_pos - hi_neg) / n, -0.5 * (lo_pos + hi_neg))
}

/// 2-D margin oracle: angle grid at `1e-4` with the optimal offset per angle,
/// refined by golden section around the best cell. Returns `(w, b, margin)`.
pub fn svm_angle_oracle(points: &[Vec<f64>], labels: &[f64]) -> Result<(Vec<f64>, f64, f64)> {
    if check(points, labels)? != 2 {
        return Err(FpError::InvalidProblem("the angle oracle needs 2-D points".into()));
    }
    let f = |theta: f64| directional_margin(points, labels, &[theta.cos(), theta.sin()]).0;
    let step = 1e-4;
    let best = grid_search(&|z: &[f64]| Some(f(z[0])), &[(0.0, std::f64::consts::TAU)], step, Sense::Maximize)?;
    let theta = golden_section_max(&f, best.best_x[0] - step, best.best_x[0] + step, 1e-13);
    let theta = if f(theta) >= best.best_value { theta } else { best.best_x[0] };
    let w = vec![theta.cos(), theta.sin()];
    let (m, b) = directional_margin(points, labels, &w);
    Ok((w, b, m))
}

/// `n` points in `[-2, 2]^2` labelled by a random line, with points closer
/// than `gap` to the line redrawn. Both classes are always present.
pub fn random_separable<R: Rng>(n: usize, gap: f64, rng: &mut R) -> (Vec<Vec<f64>>, Vec<f64>) {
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    let (w, b) = ([theta.cos(), theta.sin()], rng.random_range(-0.5..0.5));
    loop {
        let mut pts = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        while pts.len() < n {
            let p = vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let s = w[0] * p[0] + w[1] * p[1] + b;
            if s.abs() >= gap {
                labels.push(s.signum());
                pts.push(p);
            }
        }
        if labels.contains(&1.0) && labels.contains(&-1.0) {
            return (pts, labels);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_margin() {
        let pts = vec![vec![-1.0, 0.0], vec![1.0, 0.0]];
        let s = solve_svm_margin(&pts, &[-1.0, 1.0], &SolverConfig::default()).unwrap();
        assert!((s.margin - 1.0).abs() < 1e-6, "{s:?}");
        assert!((s.w[0] - 1.0).abs() < 1e-6 && s.b.abs() < 1e-6);
    }

    #[test]
    fn inactive_third_point() {
        let pts = vec![vec![0.0, -1.0], vec![0.0, 1.0], vec![2.0, 2.0]];
        let s = solve_svm_margin(&pts, &[-1.0, 1.0, 1.0], &SolverConfig::default()).unwrap();
        assert!((s.margin - 1.0).abs() < 1e-5, "{s:?}");
        assert!((s.w[1] - 1.0).abs() < 1e-5 && s.b.abs() < 1e-5);
        assert!(signed_distances(&pts, &[-1.0, 1.0, 1.0], &s.w, s.b).iter().all(|d| *d >= s.margin - 1e-12));
    }

    #[test]
    fn xor_is_not_separable() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let r = solve_svm_margin(&pts, &[1.0, 1.0, -1.0, -1.0], &SolverConfig::default());
        assert_eq!(r.unwrap_err(), FpError::NotSeparable);
    }

    #[test]
    fn rejects_single_class() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        assert!(matches!(solve_svm_margin(&pts, &[1.0, 1.0], &SolverConfig::default()), Err(FpError::InvalidProblem(_))));
    }
}
