//! Downlink MIMO beamforming for weighted sum rate.
//!
//! BS `j` serves users `(j, q)` with precoders `V_jq` (`M x d`) under the sum
//! power budget `sum_q ||V_jq||_F^2 <= P`. User `(i, k)` sees
//! `sqrt(A) = H_{ik,i} V_ik` over `B = sigma^2 I + sum_{(j,q) != (i,k)} H_{ik,j} V_jq V_jq^H H_{ik,j}^H`.
//! The matrix Lagrangian dual transform gives `f_r(V, Gamma)`, and two
//! quadratic-transform decouplings of its ratio term give WMMSE and FPLinQ.

use rand::Rng;

use crate::apps::network::MimoInstance;
use crate::error::{FpError, Result};
use crate::matrix::ldt::{matrix_ldt_gamma_update, matrix_ldt_value};
use crate::matrix::linalg::{
    c, frobenius, hermitian_solve, log_det_hpd, project_frobenius, psd_sqrt, re_trace, trust_region_quadratic_max,
};
use crate::matrix::{random_cmat, CMat};
use crate::problem::Sense;
use crate::solver::{Recorder, SolverConfig, SolverTrace, Status, Transform};

#[derive(Debug, Clone, PartialEq)]
pub struct BeamSolution {
    /// Precoders by user index.
    pub v: Vec<CMat>,
    pub value: f64,
    pub trace: SolverTrace,
}

fn cell_of(inst: &MimoInstance, u: usize) -> usize {
    u / inst.users
}

fn check_beams(inst: &MimoInstance, v: &[CMat]) -> Result<()> {
    inst.validate()?;
    if v.len() != inst.cells * inst.users {
        return Err(FpError::ShapeMismatch(format!("{} precoders for {} users", v.len(), inst.cells * inst.users)));
    }
    if v.iter().any(|m| m.shape() != (inst.tx_antennas, inst.streams)) {
        return Err(FpError::ShapeMismatch("every precoder must be M x d".into()));
    }
    Ok(())
}

fn check_variant(variant: Transform) -> Result<()> {
    match variant {
        Transform::Wmmse | Transform::Fplinq => Ok(()),
        other => Err(FpError::InvalidConfig(format!("beamforming supports wmmse or fplinq, not {}", other.name()))),
    }
}

fn signal(inst: &MimoInstance, v: &[CMat], u: usize) -> CMat {
    &inst.channels[u][cell_of(inst, u)] * &v[u]
}

/// `sigma^2 I + sum_{j,q} H_{u,j} V_jq V_jq^H H_{u,j}^H`, the own signal included.
fn total_covariance(inst: &MimoInstance, v: &[CMat], u: usize) -> CMat {
    let n = inst.rx_antennas;
    let mut t = CMat::identity(n, n).scale(inst.noise);
    for (s, vs) in v.iter().enumerate() {
        let hv = &inst.channels[u][cell_of(inst, s)] * vs;
        t += &hv * hv.adjoint();
    }
    t
}

fn interference(inst: &MimoInstance, v: &[CMat], u: usize) -> CMat {
    let s = signal(inst, v, u);
    total_covariance(inst, v, u) - &s * s.adjoint()
}

/// Per-BS sum power.
pub fn bs_powers(inst: &MimoInstance, v: &[CMat]) -> Vec<f64> {
    (0..inst.cells).map(|j| (0..inst.users).map(|q| frobenius(&v[j * inst.users + q]).powi(2)).sum()).collect()
}

/// Scales each BS's precoders jointly onto the power budget when it is exceeded.
pub fn project_beams(inst: &MimoInstance, v: &[CMat]) -> Vec<CMat> {
    let mut out = v.to_vec();
    for (j, p) in bs_powers(inst, v).into_iter().enumerate() {
        if p > inst.power_cap {
            let s = (inst.power_cap / p).sqrt();
            for q in 0..inst.users {
                out[j * inst.users + q] *= c(s);
            }
        }
    }
    out
}

/// Gaussian precoders with every BS at full power.
pub fn random_beams<R: Rng>(inst: &MimoInstance, rng: &mut R) -> Result<Vec<CMat>> {
    inst.validate()?;
    let v: Vec<CMat> = (0..inst.cells * inst.users).map(|_| random_cmat(rng, inst.tx_antennas, inst.streams)).collect();
    let powers = bs_powers(inst, &v);
    Ok(v.into_iter().enumerate().map(|(u, m)| m.scale((inst.power_cap / powers[cell_of(inst, u)]).sqrt())).collect())
}

/// `Gamma_u = sqrt(A)^H B^{-1} sqrt(A)` for every user.
pub fn optimal_gammas(inst: &MimoInstance, v: &[CMat]) -> Result<Vec<CMat>> {
    check_beams(inst, v)?;
    (0..v.len()).map(|u| matrix_ldt_gamma_update(&signal(inst, v, u), &interference(inst, v, u), u)).collect()
}

/// `sum_u w_u ln det(I + Gamma_u)`.
pub fn weighted_sum_rate(inst: &MimoInstance, v: &[CMat]) -> Result<f64> {
    let d = inst.streams;
    optimal_gammas(inst, v)?
        .iter()
        .enumerate()
        .map(|(u, g)| Ok(inst.weights[u] * log_det_hpd(&(CMat::identity(d, d) + g), u)?))
        .sum()
}

/// The Lagrangian dual surrogate `f_r(V, Gamma)`.
pub fn rate_surrogate(inst: &MimoInstance, v: &[CMat], gamma: &[CMat]) -> Result<f64> {
    check_beams(inst, v)?;
    (0..v.len())
        .map(|u| matrix_ldt_value(&signal(inst, v, u), &interference(inst, v, u), &gamma[u], inst.weights[u], u))
        .sum()
}

/// Optimal auxiliary matrices for the chosen decoupling: `T^{-1} sqrt(A)` for
/// WMMSE and `T^{-1} sqrt(A) (I + Gamma)^{1/2} sqrt(w)` for FPLinQ.
pub fn optimal_aux(inst: &MimoInstance, v: &[CMat], gamma: &[CMat], variant: Transform) -> Result<Vec<CMat>> {
    check_beams(inst, v)?;
    check_variant(variant)?;
    let d = inst.streams;
    (0..v.len())
        .map(|u| {
            let y = hermitian_solve(&total_covariance(inst, v, u), &signal(inst, v, u), u)?;
            Ok(match variant {
                Transform::Wmmse => y,
                _ => y * psd_sqrt(&(CMat::identity(d, d) + &gamma[u]))? * c(inst.weights[u].sqrt()),
            })
        })
        .collect()
}

/// `f_q^(I)` (WMMSE) or `f_q^(II)` (FPLinQ); both equal `f_r` at the optimal aux.
pub fn quadratic_surrogate(inst: &MimoInstance, v: &[CMat], gamma: &[CMat], y: &[CMat], variant: Transform) -> Result<f64> {
    check_beams(inst, v)?;
    check_variant(variant)?;
    let d = inst.streams;
    let eye = CMat::identity(d, d);
    let mut total = 0.0;
    for u in 0..v.len() {
        let w = inst.weights[u];
        let ip = &eye + &gamma[u];
        total += w * (log_det_hpd(&ip, u)? - re_trace(&gamma[u]));
        let t = total_covariance(inst, v, u);
        let s = signal(inst, v, u);
        let quad = y[u].adjoint() * &t * &y[u];
        total += match variant {
            Transform::Wmmse => {
                let lin = y[u].adjoint() * &s;
                w * re_trace(&(&ip * (&lin + lin.adjoint() - quad)))
            }
            _ => {
                let s2 = s * psd_sqrt(&ip)? * c(w.sqrt());
                2.0 * re_trace(&(y[u].adjoint() * s2)) - re_trace(&quad)
            }
        };
    }
    Ok(total)
}

/// Maximizes the quadratic surrogate over `V` per BS under its power budget.
fn beam_update(inst: &MimoInstance, gamma: &[CMat], y: &[CMat], variant: Transform) -> Result<Vec<CMat>> {
    let (m, d, k) = (inst.tx_antennas, inst.streams, inst.users);
    let eye = CMat::identity(d, d);
    let n = inst.cells * k;
    // Per-user weight on the quadratic term and the linear coefficient factor.
    let mut inner_w = Vec::with_capacity(n);
    let mut lin_w = Vec::with_capacity(n);
    for u in 0..n {
        let ip = &eye + &gamma[u];
        match variant {
            Transform::Wmmse => {
                lin_w.push(ip.scale(inst.weights[u]));
                inner_w.push(ip.scale(inst.weights[u]));
            }
            _ => {
                lin_w.push(psd_sqrt(&ip)?.scale(inst.weights[u].sqrt()));
                inner_w.push(eye.clone());
            }
        }
    }
    let mut out = vec![CMat::zeros(m, d); n];
    for j in 0..inst.cells {
        let mut q = CMat::zeros(m, m);
        for u in 0..n {
            let hy = inst.channels[u][j].adjoint() * &y[u];
            q += &hy * &inner_w[u] * hy.adjoint();
        }
        let mut cm = CMat::zeros(m, k * d);
        for s in 0..k {
            let u = j * k + s;
            let col = inst.channels[u][j].adjoint() * &y[u] * &lin_w[u];
            cm.columns_mut(s * d, d).copy_from(&col);
        }
        let x = trust_region_quadratic_max(&q, &cm, Some(inst.power_cap))?;
        for s in 0..k {
            out[j * k + s] = x.columns(s * d, d).into_owned();
        }
    }
    Ok(out)
}

/// WMMSE or FPLinQ from `v0` (projected onto the budget first).
pub fn solve_beamforming(inst: &MimoInstance, v0: &[CMat], variant: Transform, config: &SolverConfig) -> Result<BeamSolution> {
    config.validate()?;
    check_variant(variant)?;
    check_beams(inst, v0)?;
    let mut v = project_beams(inst, v0);
    let mut f = weighted_sum_rate(inst, &v)?;
    let mut rec = Recorder::new(Sense::Maximize, variant);
    rec.push(f, f, 0.0);
    let mut status = Status::MaxIters;
    for _ in 0..config.max_iters {
        let gamma = optimal_gammas(inst, &v)?;
        let y = optimal_aux(inst, &v, &gamma, variant)?;
        let vn = beam_update(inst, &gamma, &y, variant)?;
        let fn_ = weighted_sum_rate(inst, &vn)?;
        let sur = quadratic_surrogate(inst, &vn, &gamma, &y, variant)?;
        let aux = y.iter().map(|m| frobenius(m).powi(2)).sum::<f64>().sqrt();
        rec.push(fn_, sur, aux);
        v = vn;
        f = fn_;
        if rec.settled(config.obj_tol) {
            status = Status::Converged;
            break;
        }
    }
    Ok(BeamSolution { v, value: f, trace: rec.finish(status) })
}

/// Real gradient of the weighted sum rate with respect to each precoder.
pub fn rate_gradient(inst: &MimoInstance, v: &[CMat]) -> Result<Vec<CMat>> {
    check_beams(inst, v)?;
    let n = v.len();
    let mut t_inv_h = Vec::with_capacity(n);
    let mut b_inv_h = Vec::with_capacity(n);
    for u in 0..n {
        let t = total_covariance(inst, v, u);
        let b = interference(inst, v, u);
        t_inv_h.push((0..inst.cells).map(|j| hermitian_solve(&t, &inst.channels[u][j], u)).collect::<Result<Vec<_>>>()?);
        b_inv_h.push((0..inst.cells).map(|j| hermitian_solve(&b, &inst.channels[u][j], u)).collect::<Result<Vec<_>>>()?);
    }
    Ok((0..n)
        .map(|s| {
            let j = cell_of(inst, s);
            let mut g = CMat::zeros(inst.tx_antennas, inst.streams);
            for u in 0..n {
                let h = &inst.channels[u][j];
                let mut m = h.adjoint() * &t_inv_h[u][j];
                if u != s {
                    m -= h.adjoint() * &b_inv_h[u][j];
                }
                g += (m * &v[s]).scale(2.0 * inst.weights[u]);
            }
            g
        })
        .collect())
}

/// Scale-free projected-gradient residual
/// `||V - Proj(V + P grad)||_F / sqrt(P)`, i.e. the unit-step residual in
/// the coordinates `V / sqrt(P)`.
pub fn stationarity_residual(inst: &MimoInstance, v: &[CMat]) -> Result<f64> {
    let g = rate_gradient(inst, v)?;
    let p = inst.power_cap;
    let k = inst.users;
    let mut sq = 0.0;
    for j in 0..inst.cells {
        let block = |m: &dyn Fn(usize) -> CMat| {
            let mut out = CMat::zeros(inst.tx_antennas, k * inst.streams);
            for s in 0..k {
                out.columns_mut(s * inst.streams, inst.streams).copy_from(&m(j * k + s));
            }
            out
        };
        let cur = block(&|u| v[u].clone());
        let step = block(&|u| &v[u] + g[u].scale(p));
        sq += frobenius(&(&cur - project_frobenius(&step, p.sqrt()))).powi(2);
    }
    Ok(sq.sqrt() / p.sqrt())
}
