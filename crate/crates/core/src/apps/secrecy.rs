//! Secure transmission: power control maximizing the sum of secrecy rates
//! `ln(1 + Gamma_i) - ln(1 + Gamma~_i)`.
//!
//! The eavesdropper term is rewritten as `ln(1 - r_i)` with
//! `r_i = h~_ii p_i / (sum_j h~_ij p_j + sigma~^2)`, a nonincreasing concave
//! outer function of a convex-concave ratio, so the unified quadratic
//! transform applies.

use nalgebra::DMatrix;

use crate::apps::network::NetworkInstance;
use crate::error::{FpError, Result};
use crate::inner::{grid_search, ProjectedGradient};
use crate::problem::{ConstraintSet, Curvature, FPProblem, Monotonicity, OuterFunction, RatioSpec, Sense};
use crate::scalar::unified_qt_solve;
use crate::solver::{Solution, SolverConfig};

/// `(sum_j num_j p_j) / (sum_j den_j p_j + offset)`.
pub fn linear_ratio(num: Vec<f64>, den: Vec<f64>, offset: f64, curvature: Curvature) -> RatioSpec {
    let (na, nb) = (num.clone(), den.clone());
    RatioSpec::new(
        move |p| na.iter().zip(p).map(|(c, v)| c * v).sum(),
        move |_| num.clone(),
        move |p| nb.iter().zip(p).map(|(c, v)| c * v).sum::<f64>() + offset,
        move |_| den.clone(),
        curvature,
    )
}

fn eve(net: &NetworkInstance) -> Result<&DMatrix<f64>> {
    net.eve_gains.as_ref().ok_or_else(|| FpError::InvalidProblem("secrecy needs eavesdropper gains".into()))
}

/// Coefficients of ratio `i`: `g_ii p_i` over `sum_j g_ij p_j`, with or
/// without the own term in the denominator.
fn link_ratio(gains: &DMatrix<f64>, i: usize, self_in_denominator: bool) -> (Vec<f64>, Vec<f64>) {
    let n = gains.nrows();
    let mut num = vec![0.0; n];
    num[i] = gains[(i, i)];
    let den = (0..n).map(|j| if j == i && !self_in_denominator { 0.0 } else { gains[(i, j)] }).collect();
    (num, den)
}

/// Secrecy problem over `p in [0, P]^L`. Ratios `0..L` are the legitimate
/// SINRs under `ln(1 + r)`; ratios `L..2L` are the eavesdropper terms. With
/// `naive` the eavesdropper SINRs are used directly under `-ln(1 + r)`, which
/// is not concave and is flagged by the validator.
pub fn secrecy_problem(net: &NetworkInstance, naive: bool) -> Result<FPProblem> {
    net.validate()?;
    let e = eve(net)?;
    let l = net.links();
    let mut ratios = Vec::with_capacity(2 * l);
    let mut outer = Vec::with_capacity(2 * l);
    for i in 0..l {
        let (num, den) = link_ratio(&net.gains, i, false);
        ratios.push(linear_ratio(num, den, net.noise, Curvature::ConcaveConvex));
        outer.push(OuterFunction::log1p());
    }
    for i in 0..l {
        let (num, den) = link_ratio(e, i, !naive);
        ratios.push(linear_ratio(num, den, net.eve_noise, Curvature::ConvexConcave));
        outer.push(if naive {
            OuterFunction::custom(|r| -r.ln_1p(), |r| -1.0 / (1.0 + r), Monotonicity::Nonincreasing, (-1.0, f64::INFINITY))
        } else {
            OuterFunction::log_one_minus()
        });
    }
    FPProblem::sum_of_functions(ratios, outer, ConstraintSet::uniform_box(l, 0.0, net.power_cap))
}

/// Eavesdropper SINRs `Gamma~_i`.
pub fn eve_sinr(net: &NetworkInstance, p: &[f64]) -> Result<Vec<f64>> {
    let e = eve(net)?;
    let n = net.links();
    Ok((0..n)
        .map(|i| {
            let interference: f64 = (0..n).filter(|&j| j != i).map(|j| e[(i, j)] * p[j]).sum();
            e[(i, i)] * p[i] / (interference + net.eve_noise)
        })
        .collect())
}

/// Raw (possibly negative) per-link secrecy rates.
pub fn secrecy_rates(net: &NetworkInstance, p: &[f64]) -> Result<Vec<f64>> {
    let eve = eve_sinr(net, p)?;
    Ok(net.sinr(p).iter().zip(eve).map(|(g, ge)| g.ln_1p() - ge.ln_1p()).collect())
}

/// Per-link secrecy rates clamped at zero, for display.
pub fn clamped_secrecy_rates(net: &NetworkInstance, p: &[f64]) -> Result<Vec<f64>> {
    Ok(secrecy_rates(net, p)?.into_iter().map(|r| r.max(0.0)).collect())
}

/// Unclamped sum of secrecy rates, the objective being maximized.
pub fn sum_secrecy_rate(net: &NetworkInstance, p: &[f64]) -> Result<f64> {
    Ok(secrecy_rates(net, p)?.iter().sum())
}

/// Unified-QT secrecy power control from `p0`.
pub fn solve_secrecy(net: &NetworkInstance, p0: &[f64], config: &SolverConfig) -> Result<Solution> {
    let problem = secrecy_problem(net, false)?;
    let inner = ProjectedGradient::new(config.inner_tol, 20_000);
    unified_qt_solve(&problem, p0, &inner, config)
}

/// Exhaustive search of the unclamped sum secrecy rate over `[0, P]^L`, `L <= 3`.
pub fn secrecy_grid_oracle(net: &NetworkInstance, resolution: f64) -> Result<(Vec<f64>, f64)> {
    let e = eve(net)?;
    let l = net.links();
    let bounds = vec![(0.0, net.power_cap); l];
    let f = |p: &[f64]| {
        // One logarithm of the product of the per-link factors.
        let mut ratio = 1.0;
        for i in 0..l {
            let (mut leg, mut tap) = (net.noise, net.eve_noise);
            for j in (0..l).filter(|&j| j != i) {
                leg += net.gains[(i, j)] * p[j];
                tap += e[(i, j)] * p[j];
            }
            ratio *= (1.0 + net.gains[(i, i)] * p[i] / leg) / (1.0 + e[(i, i)] * p[i] / tap);
        }
        Some(ratio.ln())
    };
    let r = grid_search(&f, &bounds, resolution, Sense::Maximize)?;
    let v = sum_secrecy_rate(net, &r.best_x)?;
    Ok((r.best_x, v))
}

/// The two-link instance with `sigma^2 = 0.1`, `sigma~^2 = 1`, `P = 10`.
pub fn two_link_reference() -> NetworkInstance {
    let gains = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.09, 0.87]);
    let eve = DMatrix::from_row_slice(2, 2, &[0.5, 0.11, 0.13, 0.39]);
    NetworkInstance::new(gains, 0.1, 10.0).and_then(|n| n.with_eavesdroppers(eve, 1.0)).expect("valid reference instance")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{validate_problem, Diagnostic};

    #[test]
    fn single_link_uses_full_power() {
        let net = NetworkInstance::new(DMatrix::from_element(1, 1, 1.0), 0.1, 10.0)
            .unwrap()
            .with_eavesdroppers(DMatrix::from_element(1, 1, 0.5), 1.0)
            .unwrap();
        let s = solve_secrecy(&net, &[1.0], &SolverConfig::default()).unwrap();
        assert!((s.x[0] - 10.0).abs() < 1e-9, "{:?}", s.x);
        assert!((s.value - sum_secrecy_rate(&net, &s.x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn objective_matches_secrecy_rates() {
        let net = two_link_reference();
        let p = secrecy_problem(&net, false).unwrap();
        for x in [[1.0, 2.0], [0.0, 10.0], [3.3, 0.7]] {
            let v = crate::problem::evaluate_objective(&p, &x).unwrap();
            assert!((v - sum_secrecy_rate(&net, &x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn naive_outer_is_flagged() {
        let net = two_link_reference();
        let diags = validate_problem(&secrecy_problem(&net, true).unwrap(), 64, 1);
        assert!(diags.iter().any(|d| matches!(d, Diagnostic::NonconcaveOuter { .. })), "{diags:?}");
        let diags = validate_problem(&secrecy_problem(&net, false).unwrap(), 64, 1);
        assert!(!diags.iter().any(|d| matches!(d, Diagnostic::NonconcaveOuter { .. })), "{diags:?}");
    }

    #[test]
    fn clamp_is_display_only() {
        let net = two_link_reference();
        let p = [0.0, 10.0];
        let raw = secrecy_rates(&net, &p).unwrap();
        let shown = clamped_secrecy_rates(&net, &p).unwrap();
        assert!(raw.iter().zip(&shown).all(|(r, s)| *s == r.max(0.0)));
    }
}
