//! Sum-of-AoI minimization over packet arrival rates in a priority M/M/1
//! queue, a convex-concave sum-of-ratios minimization.

use crate::error::{FpError, Result};
use crate::inner::{golden_section_max, ProjectedGradient};
use crate::problem::{ConstraintSet, Curvature, FPProblem, ProblemKind, RatioSpec};
use crate::scalar::unified_qt_solve;
use crate::solver::{Solution, SolverConfig, Transform};

/// Lowest admissible rate, as a fraction of `mu`; keeps `rho_k` denominators positive.
pub const MIN_RATE_FRACTION: f64 = 1e-9;

fn check(k: usize, mu: f64) -> Result<()> {
    if k == 0 {
        return Err(FpError::InvalidProblem("at least one source is required".into()));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(FpError::InvalidProblem("service rate must be positive".into()));
    }
    Ok(())
}

fn rho_hat(lambda: &[f64], k: usize, mu: f64) -> f64 {
    lambda[..k].iter().sum::<f64>() / mu
}

/// `sum_k (rh^2 + 3 rh + 1) / (mu (1 + rh)) + (rh + 1)^2 / (mu rho_k)` with
/// `rho_k = lambda_k / mu` and `rh = sum_{i<k} rho_i`.
pub fn sum_aoi(mu: f64, lambda: &[f64]) -> f64 {
    (0..lambda.len())
        .map(|k| {
            let rh = rho_hat(lambda, k, mu);
            (rh * rh + 3.0 * rh + 1.0) / (mu * (1.0 + rh)) + (rh + 1.0).powi(2) / (mu * (lambda[k] / mu))
        })
        .sum()
}

/// The AoI objective as `2K` ratios: for each source `k`, the queueing term
/// then the inter-arrival term. Rates live in `[MIN_RATE_FRACTION mu, mu]`.
pub fn aoi_problem(k: usize, mu: f64) -> Result<FPProblem> {
    check(k, mu)?;
    let mut ratios = Vec::with_capacity(2 * k);
    for s in 0..k {
        let prefix = move |g: f64, n: usize| -> Vec<f64> { (0..n).map(|i| if i < s { g } else { 0.0 }).collect() };
        ratios.push(RatioSpec::new(
            move |x| {
                let rh = rho_hat(x, s, mu);
                rh * rh + 3.0 * rh + 1.0
            },
            move |x| prefix((2.0 * rho_hat(x, s, mu) + 3.0) / mu, x.len()),
            move |x| mu * (1.0 + rho_hat(x, s, mu)),
            move |x| prefix(1.0, x.len()),
            Curvature::ConvexConcave,
        ));
        ratios.push(RatioSpec::new(
            move |x| (rho_hat(x, s, mu) + 1.0).powi(2),
            move |x| prefix(2.0 * (rho_hat(x, s, mu) + 1.0) / mu, x.len()),
            move |x| x[s],
            move |x| (0..x.len()).map(|i| if i == s { 1.0 } else { 0.0 }).collect(),
            Curvature::ConvexConcave,
        ));
    }
    FPProblem::new(ProblemKind::SumMin, ratios, ConstraintSet::uniform_box(k, MIN_RATE_FRACTION * mu, mu))
}

/// Best common rate by one-dimensional search.
pub fn equal_rate_baseline(k: usize, mu: f64) -> Result<(Vec<f64>, f64)> {
    check(k, mu)?;
    let f = |l: f64| -sum_aoi(mu, &vec![l; k]);
    let l = golden_section_max(&f, MIN_RATE_FRACTION * mu, mu, 1e-13 * mu);
    let lambda = vec![l; k];
    let v = sum_aoi(mu, &lambda);
    Ok((lambda, v))
}

/// Every source at `lambda_k = mu`.
pub fn max_rate_baseline(k: usize, mu: f64) -> Result<(Vec<f64>, f64)> {
    check(k, mu)?;
    let lambda = vec![mu; k];
    let v = sum_aoi(mu, &lambda);
    Ok((lambda, v))
}

/// Inverse-QT (or AM-GM when `config.variant` is [`Transform::AmGm`]) rate
/// optimization, started from the equal-rate optimum.
pub fn solve_aoi(k: usize, mu: f64, config: &SolverConfig) -> Result<Solution> {
    let problem = aoi_problem(k, mu)?;
    let (start, _) = equal_rate_baseline(k, mu)?;
    let variant = if config.variant == Transform::AmGm { Transform::AmGm } else { Transform::InverseQuadratic };
    let config = config.clone().with_variant(variant);
    let inner = ProjectedGradient::new(config.inner_tol, 20_000);
    unified_qt_solve(&problem, &start, &inner, &config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::evaluate_objective;

    #[test]
    fn single_source() {
        let s = solve_aoi(1, 1.0, &SolverConfig::default()).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-9);
        assert!((s.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn ratios_sum_to_objective() {
        let p = aoi_problem(4, 1.5).unwrap();
        let lambda = [0.3, 0.2, 0.9, 1.1];
        let v = evaluate_objective(&p, &lambda).unwrap();
        assert!((v - sum_aoi(1.5, &lambda)).abs() < 1e-12);
    }

    #[test]
    fn gradients_match_differences() {
        let p = aoi_problem(3, 1.0).unwrap();
        let x = [0.3, 0.4, 0.5];
        for r in &p.ratios {
            let fa = crate::problem::central_difference(&|z: &[f64]| r.a(z), &x);
            let fb = crate::problem::central_difference(&|z: &[f64]| r.b(z), &x);
            for d in 0..3 {
                assert!((fa[d] - r.grad_a(&x)[d]).abs() < 1e-6);
                assert!((fb[d] - r.grad_b(&x)[d]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn both_variants_beat_baselines() {
        for variant in [Transform::InverseQuadratic, Transform::AmGm] {
            let s = solve_aoi(4, 1.0, &SolverConfig::default().with_variant(variant)).unwrap();
            let (_, eq) = equal_rate_baseline(4, 1.0).unwrap();
            let (_, mx) = max_rate_baseline(4, 1.0).unwrap();
            assert!(s.value < eq && eq < mx, "{} {eq} {mx}", s.value);
            assert!(s.trace.is_monotone(1e-10));
            assert_eq!(s.trace.variant, variant);
        }
    }
}
