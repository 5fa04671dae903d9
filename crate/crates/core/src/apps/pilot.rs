//! Uplink pilot design against pilot contamination (FPP).
//!
//! User `(i, k)` owns the pilot `s_ik` in `C^tau` with `||s_ik||^2 <= rho`.
//! BS `i` observes `D_i = sigma^2 I + sum_{j,q} beta_ijq s_jq s_jq^H` and the
//! sum of MMSE channel-estimation errors is
//! `N sum_ik beta_iik - N sum_ik beta_iik^2 s_ik^H D_i^{-1} s_ik`, so the
//! design maximizes a sum of structured matrix ratios.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::apps::network::{generate_pilot_instance, Pathloss, PilotInstance, Topology};
use crate::error::{FpError, Result};
use crate::matrix::linalg::c;
use crate::matrix::{random_cvec, solve_matrix_fp, BlockSet, CMat, CVec, MatrixRatioProblem, MatrixSolution};
use crate::solver::{SolverConfig, Transform};

/// Reduced-scale pilot study: 3 cells of 3 users, 1 km sites, pathloss
/// exponent 3 without shadowing, 40 dBm against a 0 dBm floor so that
/// contamination rather than noise dominates.
pub fn pilot_study_topology() -> Topology {
    Topology {
        users_per_cell: 3,
        isd_km: 1.0,
        shadowing_db: 0.0,
        tx_power_dbm: 40.0,
        noise_dbm: 0.0,
        pathloss: Pathloss::Exponent(3.0),
        ..Topology::default()
    }
}

/// Pilot instance of the study: `N = 4` antennas, `tau = 4`, `rho = 1`.
pub fn pilot_study_instance(seed: u64) -> Result<PilotInstance> {
    generate_pilot_instance(&pilot_study_topology(), 4, 4, 1.0, seed)
}

fn term(inst: &PilotInstance, cell: usize, user: usize) -> usize {
    cell * inst.users + user
}

/// Matrix-ratio form: term `(i, k)` has `A = beta_iik I` and
/// `B_{(i,k),(j,q)} = sqrt(beta_ijq) I`.
pub fn pilot_problem(inst: &PilotInstance) -> Result<MatrixRatioProblem> {
    inst.validate()?;
    let (l, k, tau) = (inst.cells, inst.users, inst.pilot_len);
    let n = l * k;
    let eye = CMat::identity(tau, tau);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..l {
        for u in 0..k {
            a.push(eye.scale(inst.beta(i, i, u)));
            let row = (0..l).flat_map(|j| (0..k).map(move |q| (j, q))).map(|(j, q)| eye.scale(inst.beta(i, j, q).sqrt())).collect();
            b.push(row);
        }
    }
    MatrixRatioProblem::new(a, b, vec![inst.noise; n], vec![1.0; n], vec![BlockSet::Ball(inst.pilot_power.sqrt()); n])
}

/// Sum of per-antenna MMSE estimation errors over all in-cell channels.
pub fn channel_mse(inst: &PilotInstance, pilots: &[CVec]) -> Result<f64> {
    let problem = pilot_problem(inst)?;
    let total: f64 = (0..inst.cells).flat_map(|i| (0..inst.users).map(move |u| (i, u))).map(|(i, u)| inst.beta(i, i, u)).sum();
    Ok(inst.antennas as f64 * (total - problem.objective(pilots)?))
}

/// Each cell draws a random `K`-subset of the `tau` canonical pilots, in
/// random order, scaled to power `rho`.
pub fn orthogonal_pilots<R: Rng>(inst: &PilotInstance, rng: &mut R) -> Result<Vec<CVec>> {
    inst.validate()?;
    if inst.users > inst.pilot_len {
        return Err(FpError::InvalidProblem(format!("{} users cannot share {} orthogonal pilots", inst.users, inst.pilot_len)));
    }
    let amp = c(inst.pilot_power.sqrt());
    let mut out = vec![CVec::zeros(inst.pilot_len); inst.cells * inst.users];
    for i in 0..inst.cells {
        let mut slots: Vec<usize> = (0..inst.pilot_len).collect();
        slots.shuffle(rng);
        for u in 0..inst.users {
            out[term(inst, i, u)][slots[u]] = amp;
        }
    }
    Ok(out)
}

/// Circularly symmetric Gaussian pilots normalized to power `rho`.
pub fn random_pilots<R: Rng>(inst: &PilotInstance, rng: &mut R) -> Result<Vec<CVec>> {
    inst.validate()?;
    let r = inst.pilot_power.sqrt();
    Ok((0..inst.cells * inst.users)
        .map(|_| {
            let v = random_cvec(rng, inst.pilot_len);
            v.scale(r / v.norm().max(1e-300))
        })
        .collect())
}

/// FPP from `init` with the given matrix-QT variant (basic, nonhomogeneous
/// or extrapolated).
pub fn solve_pilot_fpp(inst: &PilotInstance, init: &[CVec], variant: Transform, config: &SolverConfig) -> Result<MatrixSolution> {
    let problem = pilot_problem(inst)?;
    solve_matrix_fp(&problem, init, variant, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn scalar_instance() -> PilotInstance {
        PilotInstance { cells: 1, users: 1, antennas: 1, pilot_len: 1, pilot_power: 4.0, noise: 1.0, beta: vec![vec![1.0]], seed: 0 }
    }

    #[test]
    fn scalar_pilot_uses_full_power() {
        let inst = scalar_instance();
        let s = solve_pilot_fpp(&inst, &[CVec::from_element(1, c(0.5))], Transform::Basic, &SolverConfig::default()).unwrap();
        assert!((s.x[0].norm_squared() - 4.0).abs() < 1e-9);
        assert!((s.value - 0.8).abs() < 1e-9);
        assert!((channel_mse(&inst, &s.x).unwrap() - 0.2).abs() < 1e-9);
    }

    #[test]
    fn baselines_respect_power() {
        let topo = Topology { users_per_cell: 3, tx_power_dbm: 23.0, ..Topology::default() };
        let inst = generate_pilot_instance(&topo, 4, 4, 1.0, 2).unwrap();
        let mut rng = seeded(1);
        for p in [orthogonal_pilots(&inst, &mut rng).unwrap(), random_pilots(&inst, &mut rng).unwrap()] {
            assert!(p.iter().all(|s| (s.norm_squared() - 1.0).abs() < 1e-12));
        }
        let orth = orthogonal_pilots(&inst, &mut rng).unwrap();
        for u in 0..3 {
            for v in 0..u {
                assert_eq!(orth[u].dotc(&orth[v]).norm(), 0.0);
            }
        }
    }

    #[test]
    fn fpp_improves_on_orthogonal_start() {
        let topo = Topology { users_per_cell: 3, tx_power_dbm: 23.0, ..Topology::default() };
        let inst = generate_pilot_instance(&topo, 4, 4, 1.0, 5).unwrap();
        let init = orthogonal_pilots(&inst, &mut seeded(5)).unwrap();
        let s = solve_pilot_fpp(&inst, &init, Transform::Basic, &SolverConfig::default()).unwrap();
        assert!(s.trace.is_monotone(1e-10));
        assert!(channel_mse(&inst, &s.x).unwrap() <= channel_mse(&inst, &init).unwrap());
        assert!(s.x.iter().all(|v| v.norm_squared() <= 1.0 + 1e-9));
    }

    #[test]
    fn noiseless_rank_deficient_pilots_are_singular() {
        let mut inst = scalar_instance();
        inst.noise = 0.0;
        let r = solve_pilot_fpp(&inst, &[CVec::zeros(1)], Transform::Basic, &SolverConfig::default());
        assert!(matches!(r, Err(FpError::SingularDenominator { .. })), "{r:?}");
    }
}
