//! Joint uplink scheduling and power control with the FPLinQ decoupling.
//!
//! With the rate ratios moved out of the logarithm and the quadratic
//! transform applied per BS, the surrogate splits into one term per cell in
//! that cell's `(user, power)` pair, so each cell picks the candidate with
//! the best decoupled score and its closed-form power.

use crate::apps::network::UplinkInstance;
use crate::apps::power::{full_power, solve_power_control};
use crate::error::{FpError, Result};
use crate::problem::Sense;
use crate::solver::{l2, Recorder, SolverConfig, SolverTrace, Status, Transform};

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleSolution {
    /// Scheduled candidate per cell.
    pub schedule: Vec<usize>,
    pub powers: Vec<f64>,
    pub value: f64,
    pub trace: SolverTrace,
}

fn check_schedule(inst: &UplinkInstance, schedule: &[usize]) -> Result<()> {
    inst.validate()?;
    if schedule.len() != inst.cells() {
        return Err(FpError::ShapeMismatch(format!("{} choices for {} cells", schedule.len(), inst.cells())));
    }
    if let Some(j) = (0..schedule.len()).find(|&j| schedule[j] >= inst.candidates(j)) {
        return Err(FpError::InvalidProblem(format!("cell {j} has no candidate {}", schedule[j])));
    }
    Ok(())
}

/// Weighted sum rate of the scheduled users.
pub fn scheduled_rate(inst: &UplinkInstance, schedule: &[usize], p: &[f64]) -> Result<f64> {
    check_schedule(inst, schedule)?;
    Ok(inst.scheduled_network(schedule)?.weighted_sum_rate(p))
}

/// Best power and decoupled score of candidate `u` in cell `j`, given the
/// per-BS auxiliaries.
fn candidate_score(inst: &UplinkInstance, j: usize, u: usize, gamma: &[f64], y: &[f64]) -> (f64, f64) {
    let w = inst.weights[j][u];
    let g = gamma[j];
    let lin = y[j] * (w * (1.0 + g) * inst.gains[j][j][u]).sqrt();
    let quad: f64 = (0..inst.cells()).map(|i| y[i] * y[i] * inst.gains[i][j][u]).sum();
    let p = if quad > 0.0 { (lin / quad).powi(2).min(inst.power_cap) } else { inst.power_cap };
    let score = w * (g.ln_1p() - g) + 2.0 * lin * p.sqrt() - quad * p;
    (p, score)
}

/// Alternates the closed-form auxiliaries with per-cell argmax over
/// candidates. Ties keep the lowest index.
pub fn schedule_uplink_fplinq(inst: &UplinkInstance, init: &[usize], config: &SolverConfig) -> Result<ScheduleSolution> {
    config.validate()?;
    check_schedule(inst, init)?;
    let l = inst.cells();
    let mut schedule = init.to_vec();
    let mut p = vec![inst.power_cap; l];
    let mut f = scheduled_rate(inst, &schedule, &p)?;
    let mut rec = Recorder::new(Sense::Maximize, Transform::Fplinq);
    rec.push(f, f, 0.0);
    let mut status = Status::MaxIters;
    for _ in 0..config.max_iters {
        let net = inst.scheduled_network(&schedule)?;
        let gamma = net.sinr(&p);
        let y: Vec<f64> = (0..l)
            .map(|i| {
                let t: f64 = (0..l).map(|j| net.gains[(i, j)] * p[j]).sum::<f64>() + net.noise;
                (net.weights[i] * (1.0 + gamma[i]) * net.gains[(i, i)] * p[i]).sqrt() / t
            })
            .collect();
        let mut next = schedule.clone();
        let mut pn = p.clone();
        let mut surrogate = -inst.noise * y.iter().map(|v| v * v).sum::<f64>();
        for j in 0..l {
            let mut best = (schedule[j], candidate_score(inst, j, schedule[j], &gamma, &y));
            for u in 0..inst.candidates(j) {
                let c = candidate_score(inst, j, u, &gamma, &y);
                if c.1 > best.1 .1 || (c.1 == best.1 .1 && u < best.0) {
                    best = (u, c);
                }
            }
            next[j] = best.0;
            pn[j] = best.1 .0;
            surrogate += best.1 .1;
        }
        let fn_ = scheduled_rate(inst, &next, &pn)?;
        if !fn_.is_finite() {
            status = Status::Degenerate;
            break;
        }
        let same = next == schedule;
        rec.push(fn_, surrogate, l2(&y));
        schedule = next;
        p = pn;
        f = fn_;
        if same && rec.settled(config.obj_tol) {
            status = Status::Converged;
            break;
        }
    }
    Ok(ScheduleSolution { schedule, powers: p, value: f, trace: rec.finish(status) })
}

/// Per cell, the candidate with the largest `w g_jj`.
pub fn strongest_candidates(inst: &UplinkInstance) -> Result<Vec<usize>> {
    inst.validate()?;
    Ok((0..inst.cells())
        .map(|j| {
            let score = |u: usize| inst.weights[j][u] * inst.gains[j][j][u];
            (0..inst.candidates(j)).fold(0, |b, u| if score(u) > score(b) { u } else { b })
        })
        .collect())
}

/// Every schedule with power control from full power; returns the best
/// schedule, its powers and value.
pub fn exhaustive_schedule(inst: &UplinkInstance, config: &SolverConfig) -> Result<(Vec<usize>, Vec<f64>, f64)> {
    inst.validate()?;
    let l = inst.cells();
    let total: usize = (0..l).map(|j| inst.candidates(j)).product();
    let mut best: Option<(Vec<usize>, Vec<f64>, f64)> = None;
    for mut code in 0..total {
        let schedule: Vec<usize> = (0..l)
            .map(|j| {
                let u = code % inst.candidates(j);
                code /= inst.candidates(j);
                u
            })
            .collect();
        let net = inst.scheduled_network(&schedule)?;
        let s = solve_power_control(&net, &full_power(&net), config)?;
        if best.as_ref().map_or(true, |b| s.value > b.2) {
            best = Some((schedule, s.x, s.value));
        }
    }
    best.ok_or_else(|| FpError::InvalidProblem("no schedules to enumerate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apps::network::{generate_uplink, Topology};

    #[test]
    fn picks_dominant_candidate() {
        let inst =
            UplinkInstance { gains: vec![vec![vec![1.0, 4.0]]], weights: vec![vec![1.0, 1.0]], noise: 1.0, power_cap: 1.0, seed: 0 };
        let s = schedule_uplink_fplinq(&inst, &[0], &SolverConfig::default()).unwrap();
        assert_eq!(s.schedule, vec![1]);
        assert!((s.value - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn single_candidates_reduce_to_power_control() {
        let inst = UplinkInstance {
            gains: vec![vec![vec![1.0], vec![0.3]], vec![vec![0.2], vec![0.8]]],
            weights: vec![vec![1.0], vec![2.0]],
            noise: 0.1,
            power_cap: 5.0,
            seed: 0,
        };
        let cfg = SolverConfig::default().with_max_iters(5000);
        let s = schedule_uplink_fplinq(&inst, &[0, 0], &cfg).unwrap();
        let net = inst.scheduled_network(&[0, 0]).unwrap();
        let pc = solve_power_control(&net, &full_power(&net), &cfg).unwrap();
        assert!((s.value - pc.value).abs() < 1e-9, "{} vs {}", s.value, pc.value);
    }

    #[test]
    fn monotone_on_random_drops() {
        let topo = Topology { users_per_cell: 3, ..Topology::default() };
        for seed in 0..5 {
            let inst = generate_uplink(&topo, seed).unwrap();
            let s = schedule_uplink_fplinq(&inst, &[0, 0, 0], &SolverConfig::default().with_max_iters(2000)).unwrap();
            assert!(s.trace.is_monotone(1e-10));
            assert!(s.powers.iter().all(|p| *p >= 0.0 && *p <= inst.power_cap));
        }
    }

    #[test]
    fn rejects_bad_schedule() {
        let inst = UplinkInstance { gains: vec![vec![vec![1.0]]], weights: vec![vec![1.0]], noise: 1.0, power_cap: 1.0, seed: 0 };
        assert!(schedule_uplink_fplinq(&inst, &[1], &SolverConfig::default()).is_err());
    }
}
