//! Weighted sum-rate power control for interfering links via the Lagrangian
//! dual transform and the quadratic transform, all in closed form.

use rand::Rng;

use crate::apps::network::NetworkInstance;
use crate::error::{FpError, Result};
use crate::inner::grid_search;
use crate::problem::Sense;
use crate::solver::{l2, Recorder, Solution, SolverConfig, Status, Transform};

/// Relative tolerance used to classify a power as sitting on the cap.
const CAP_TOL: f64 = 1e-9;

/// Received power `sum_j g_ij p_j + sigma^2` at each receiver.
fn received(net: &NetworkInstance, p: &[f64]) -> Vec<f64> {
    let n = net.links();
    (0..n).map(|i| (0..n).map(|j| net.gains[(i, j)] * p[j]).sum::<f64>() + net.noise).collect()
}

/// `sum_i w_i [ln(1 + gamma_i) - gamma_i] + 2 y_i sqrt(w_i (1 + gamma_i) g_ii p_i) - y_i^2 T_i(p)`.
fn surrogate(net: &NetworkInstance, p: &[f64], gamma: &[f64], y: &[f64]) -> f64 {
    let t = received(net, p);
    (0..net.links())
        .map(|i| {
            let w = net.weights[i];
            let g = gamma[i];
            w * (g.ln_1p() - g) + 2.0 * y[i] * (w * (1.0 + g) * net.gains[(i, i)] * p[i]).sqrt() - y[i] * y[i] * t[i]
        })
        .sum()
}

fn check_start(net: &NetworkInstance, p0: &[f64]) -> Result<Vec<f64>> {
    net.validate()?;
    if p0.len() != net.links() {
        return Err(FpError::ShapeMismatch(format!("{} powers for {} links", p0.len(), net.links())));
    }
    Ok(p0.iter().map(|p| p.clamp(0.0, net.power_cap)).collect())
}

/// One closed-form cycle: `gamma`, then `y`, then `p`. Returns the new powers
/// with the auxiliaries used.
pub fn power_cycle(net: &NetworkInstance, p: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = net.links();
    let gamma = net.sinr(p);
    let t = received(net, p);
    let y: Vec<f64> =
        (0..n).map(|i| (net.weights[i] * (1.0 + gamma[i]) * net.gains[(i, i)] * p[i]).sqrt() / t[i]).collect();
    let next = (0..n)
        .map(|i| {
            let denom: f64 = (0..n).map(|j| y[j] * y[j] * net.gains[(j, i)]).sum();
            let num = y[i] * y[i] * net.weights[i] * (1.0 + gamma[i]) * net.gains[(i, i)];
            if denom > 0.0 {
                (num / (denom * denom)).min(net.power_cap)
            } else {
                net.power_cap
            }
        })
        .collect();
    (next, gamma, y)
}

/// Closed-form FP power control from `p0`. Stops when the weighted sum rate
/// changes by at most `obj_tol` and every power moves by at most `inner_tol`
/// relative to itself (powers below `1e-9 P` are measured against `1e-9 P`).
/// An uncapped cycle coincides with [`fixed_point_map`], so the relative step
/// bounds the fixed-point residual of interior powers.
pub fn solve_power_control(net: &NetworkInstance, p0: &[f64], config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    let mut p = check_start(net, p0)?;
    let mut f = net.weighted_sum_rate(&p);
    let mut rec = Recorder::new(Sense::Maximize, Transform::Quadratic);
    rec.push(f, f, 0.0);
    let mut status = Status::MaxIters;
    for _ in 0..config.max_iters {
        let (pn, gamma, y) = power_cycle(net, &p);
        let fn_ = net.weighted_sum_rate(&pn);
        if !fn_.is_finite() {
            status = Status::Degenerate;
            break;
        }
        let floor = CAP_TOL * net.power_cap;
        let still = p.iter().zip(&pn).all(|(a, b)| (a - b).abs() <= config.inner_tol * a.max(floor));
        rec.push(fn_, surrogate(net, &pn, &gamma, &y), l2(&y));
        p = pn;
        f = fn_;
        if rec.settled(config.obj_tol) && still {
            status = Status::Converged;
            break;
        }
    }
    Ok(Solution { x: p, value: f, trace: rec.finish(status) })
}

pub fn full_power(net: &NetworkInstance) -> Vec<f64> {
    vec![net.power_cap; net.links()]
}

/// Powers drawn uniformly from `[0, P]`.
pub fn random_power<R: Rng>(net: &NetworkInstance, rng: &mut R) -> Vec<f64> {
    (0..net.links()).map(|_| rng.random::<f64>() * net.power_cap).collect()
}

/// The fixed-point map `G_i(p) = (w_i^2 Gamma_i^2 / p_i) (sum_j w_j Gamma_j^2 g_ji / ((1 + Gamma_j) g_jj p_j))^-2`
/// whose fixed points are the stationary points reached by [`power_cycle`].
pub fn fixed_point_map(net: &NetworkInstance, p: &[f64]) -> Vec<f64> {
    let n = net.links();
    let gamma = net.sinr(p);
    let s: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    net.weights[j] * gamma[j] * gamma[j] * net.gains[(j, i)] / ((1.0 + gamma[j]) * net.gains[(j, j)] * p[j])
                })
                .sum()
        })
        .collect();
    (0..n).map(|i| net.weights[i].powi(2) * gamma[i].powi(2) / p[i] / (s[i] * s[i])).collect()
}

/// Relative residual `|G_i(p) - p_i| / p_i` for each interior power, `None`
/// for powers on the cap or at zero.
pub fn fixed_point_residuals(net: &NetworkInstance, p: &[f64]) -> Vec<Option<f64>> {
    let g = fixed_point_map(net, p);
    p.iter()
        .zip(g)
        .map(|(&pi, gi)| {
            let interior = pi > CAP_TOL * net.power_cap && pi < net.power_cap * (1.0 - CAP_TOL);
            interior.then(|| (gi - pi).abs() / pi)
        })
        .collect()
}

/// Exhaustive weighted sum-rate search over `[0, P]^K` for `K <= 3`.
pub fn power_grid_oracle(net: &NetworkInstance, resolution: f64) -> Result<(Vec<f64>, f64)> {
    let bounds = vec![(0.0, net.power_cap); net.links()];
    let f = |p: &[f64]| Some(net.weighted_sum_rate(p));
    let r = grid_search(&f, &bounds, resolution, Sense::Maximize)?;
    Ok((r.best_x, r.best_value))
}
