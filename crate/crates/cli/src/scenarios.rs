//! One runner per scenario. Each returns the summary rows and traces of a
//! single seed.

use fracprog::apps::{
    aoi, beamforming, ee, generate_mimo, generate_network, generate_pilot_instance, generate_uplink, ncut, pilot, power,
    schedule, secrecy, svm, NetworkInstance, Pathloss, Topology,
};
use fracprog::inner::grid_search;
use fracprog::rng::{seeded, substream};
use fracprog::{Sense, SolverConfig, SolverTrace, Status, Transform};
use nalgebra::DMatrix;

use crate::config::{Scenario, ScenarioConfig};
use crate::output::{sci, sci_list, SummaryRow};
use crate::CliError;

#[derive(Debug, Clone, Default)]
pub struct SeedRun {
    pub rows: Vec<SummaryRow>,
    /// `(method, trace)` for every iterative method.
    pub traces: Vec<(String, SolverTrace)>,
}

impl SeedRun {
    fn solved(&mut self, seed: u64, method: &str, value: f64, trace: SolverTrace, detail: String) {
        self.rows.push(SummaryRow {
            seed,
            method: method.into(),
            value,
            iterations: Some(trace.iterations()),
            status: trace.status.name().into(),
            detail,
        });
        self.traces.push((method.into(), trace));
    }

    fn fixed(&mut self, seed: u64, method: &str, value: f64, detail: String) {
        self.rows.push(SummaryRow { seed, method: method.into(), value, iterations: None, status: "-".into(), detail });
    }
}

pub fn run_seed(cfg: &ScenarioConfig, seed: u64) -> Result<SeedRun, CliError> {
    let solver = cfg.solver_for(seed);
    match cfg.scenario {
        Scenario::Ee => run_ee(cfg, seed, &solver),
        Scenario::Svm => run_svm(cfg, seed, &solver),
        Scenario::Aoi => run_aoi(cfg, seed, &solver),
        Scenario::Secrecy => run_secrecy(cfg, seed, &solver),
        Scenario::Power => run_power(cfg, seed, &solver),
        Scenario::Ncut => run_ncut(cfg, seed, &solver),
        Scenario::Pilot => run_pilot(cfg, seed, &solver),
        Scenario::Beamform => run_beamform(cfg, seed, &solver),
        Scenario::Schedule => run_schedule(cfg, seed, &solver),
        Scenario::Rates => run_rates(cfg, seed, &solver),
    }
}

/// Methods to run: all of `all`, or the one picked by `--variant`.
fn pick(cfg: &ScenarioConfig, all: &[Transform]) -> Result<Vec<Transform>, CliError> {
    match cfg.variant {
        None => Ok(all.to_vec()),
        Some(v) if all.contains(&v) => Ok(vec![v]),
        Some(v) => {
            let names: Vec<&str> = all.iter().map(|t| t.name()).collect();
            Err(CliError::Config(format!("scenario `{}` does not take variant `{v}` (expected one of {})", cfg.scenario, names.join(", "))))
        }
    }
}

fn topology(cfg: &ScenarioConfig, base: Topology) -> Result<Topology, CliError> {
    let pathloss = match cfg.list::<f64>("pathloss_exponent")? {
        Some(v) if v.len() == 1 => Pathloss::Exponent(v[0]),
        Some(_) => return Err(CliError::Config("`pathloss_exponent` takes one value".into())),
        None => base.pathloss,
    };
    Ok(Topology {
        cells: cfg.get("cells", base.cells)?,
        users_per_cell: cfg.get("users_per_cell", base.users_per_cell)?,
        isd_km: cfg.get("isd_km", base.isd_km)?,
        min_dist_km: cfg.get("min_dist_km", base.min_dist_km)?,
        shadowing_db: cfg.get("shadowing_db", base.shadowing_db)?,
        tx_power_dbm: cfg.get("tx_power_dbm", base.tx_power_dbm)?,
        noise_dbm: cfg.get("noise_dbm", base.noise_dbm)?,
        pathloss,
    })
}

fn run_ee(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    let link = if cfg.get("random", false)? {
        ee::Link::random(&mut seeded(seed))
    } else {
        let d = ee::Link::default();
        ee::Link {
            gain: cfg.get("gain", d.gain)?,
            noise: cfg.get("noise", d.noise)?,
            circuit: cfg.get("circuit", d.circuit)?,
            power_cap: cfg.get("power_cap", d.power_cap)?,
        }
    };
    let mut run = SeedRun::default();
    for method in pick(cfg, &[Transform::Dinkelbach, Transform::Quadratic])? {
        let s = match method {
            Transform::Dinkelbach => ee::solve_energy_efficiency(&link, solver)?,
            _ => ee::solve_energy_efficiency_qt(&link, solver)?,
        };
        run.solved(seed, method.name(), s.value, s.trace, format!("p={}", sci(s.x[0])));
    }
    if cfg.oracle {
        let (p, v) = ee::ee_golden(&link)?;
        run.fixed(seed, "golden-oracle", v, format!("p={}", sci(p)));
    }
    Ok(run)
}

fn run_svm(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    pick(cfg, &[Transform::Dinkelbach])?;
    let (points, labels) = match cfg.list::<f64>("points")? {
        Some(flat) => {
            let dim: usize = cfg.get("dim", 2)?;
            if dim == 0 || flat.len() % dim != 0 {
                return Err(CliError::Config(format!("{} coordinates do not split into rows of {dim}", flat.len())));
            }
            let labels = cfg.list::<f64>("labels")?.ok_or_else(|| CliError::Config("`points` needs `labels`".into()))?;
            (flat.chunks(dim).map(<[f64]>::to_vec).collect(), labels)
        }
        None => svm::random_separable(cfg.get("n", 20)?, cfg.get("gap", 0.05)?, &mut seeded(seed)),
    };
    let s = svm::solve_svm_margin(&points, &labels, solver)?;
    let mut run = SeedRun::default();
    run.solved(seed, "dinkelbach", s.margin, s.trace, format!("w={} b={}", sci_list(&s.w), sci(s.b)));
    if cfg.oracle && points[0].len() == 2 {
        let (w, b, m) = svm::svm_angle_oracle(&points, &labels)?;
        run.fixed(seed, "angle-oracle", m, format!("w={} b={}", sci_list(&w), sci(b)));
    }
    Ok(run)
}

fn run_aoi(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    let k: usize = cfg.get("k", 3)?;
    let mu: f64 = cfg.get("mu", 1.0)?;
    let mut run = SeedRun::default();
    for method in pick(cfg, &[Transform::InverseQuadratic, Transform::AmGm])? {
        let s = aoi::solve_aoi(k, mu, &solver.clone().with_variant(method))?;
        run.solved(seed, method.name(), s.value, s.trace, format!("lambda={}", sci_list(&s.x)));
    }
    let (l, v) = aoi::equal_rate_baseline(k, mu)?;
    run.fixed(seed, "equal-rate", v, format!("lambda={}", sci_list(&l)));
    let (l, v) = aoi::max_rate_baseline(k, mu)?;
    run.fixed(seed, "max-rate", v, format!("lambda={}", sci_list(&l)));
    if cfg.oracle && k <= 2 {
        let res: f64 = cfg.get("grid_resolution", 1e-3)?;
        let lo = aoi::MIN_RATE_FRACTION * mu;
        let f = |l: &[f64]| Some(aoi::sum_aoi(mu, l));
        let g = grid_search(&f, &vec![(lo, mu); k], res * mu, Sense::Minimize)?;
        run.fixed(seed, "grid-oracle", g.best_value, format!("lambda={}", sci_list(&g.best_x)));
    }
    Ok(run)
}

fn square(cfg: &ScenarioConfig, key: &str) -> Result<Option<DMatrix<f64>>, CliError> {
    let Some(v) = cfg.list::<f64>(key)? else { return Ok(None) };
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() || n == 0 {
        return Err(CliError::Config(format!("`{key}` must hold a square matrix, got {} values", v.len())));
    }
    Ok(Some(DMatrix::from_row_slice(n, n, &v)))
}

fn run_secrecy(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    pick(cfg, &[Transform::Quadratic])?;
    let reference = secrecy::two_link_reference();
    let net = match (square(cfg, "gains")?, square(cfg, "eve_gains")?) {
        (None, None) => reference,
        (Some(g), Some(e)) => NetworkInstance::new(g, cfg.get("noise", reference.noise)?, cfg.get("power_cap", reference.power_cap)?)?
            .with_eavesdroppers(e, cfg.get("eve_noise", reference.eve_noise)?)?,
        _ => return Err(CliError::Config("`gains` and `eve_gains` go together".into())),
    };
    let s = secrecy::solve_secrecy(&net, &power::full_power(&net), solver)?;
    let mut run = SeedRun::default();
    run.solved(seed, "qt", s.value, s.trace, format!("p={}", sci_list(&s.x)));
    if cfg.oracle {
        let res: f64 = cfg.get("grid_resolution", 1e-3)?;
        let (p, v) = secrecy::secrecy_grid_oracle(&net, res)?;
        run.fixed(seed, "grid-oracle", v, format!("p={}", sci_list(&p)));
    }
    Ok(run)
}

fn run_power(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    pick(cfg, &[Transform::Quadratic])?;
    let net = generate_network(&topology(cfg, Topology::default())?, seed)?;
    let s = power::solve_power_control(&net, &power::full_power(&net), solver)?;
    let mut run = SeedRun::default();
    run.solved(seed, "qt", s.value, s.trace, format!("p={}", sci_list(&s.x)));
    let full = power::full_power(&net);
    run.fixed(seed, "full-power", net.weighted_sum_rate(&full), format!("p={}", sci_list(&full)));
    let rand = power::random_power(&net, &mut substream(seed, 1));
    run.fixed(seed, "random-power", net.weighted_sum_rate(&rand), format!("p={}", sci_list(&rand)));
    if cfg.oracle && net.links() <= 3 {
        let points: f64 = cfg.get("grid_points", 200.0)?;
        let (p, v) = power::power_grid_oracle(&net, net.power_cap / points)?;
        run.fixed(seed, "grid-oracle", v, format!("p={}", sci_list(&p)));
    }
    Ok(run)
}

fn labels_detail(labels: &[usize]) -> String {
    let l: Vec<String> = labels.iter().map(usize::to_string).collect();
    format!("labels={}", l.join(";"))
}

fn run_ncut(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    pick(cfg, &[Transform::Quadratic])?;
    let graph = match cfg.get("graph", String::from("planted"))?.as_str() {
        "planted" => ncut::planted_graph(cfg.get("n", 10)?, seed)?,
        "four-node" => ncut::four_node_graph(),
        other => return Err(CliError::Config(format!("unknown graph `{other}` (planted or four-node)"))),
    };
    let init = ncut::random_labels(graph.nodes(), graph.clusters, &mut substream(seed, 1));
    let s = ncut::solve_ncut_fpc(&graph, &init, solver)?;
    let mut run = SeedRun::default();
    run.solved(seed, "fpc", s.ncut, s.trace, labels_detail(&s.labels));
    if cfg.oracle {
        let (labels, v) = ncut::ncut_oracle(&graph)?;
        run.fixed(seed, "enumeration-oracle", v, labels_detail(&labels));
    }
    Ok(run)
}

fn pilot_instance(cfg: &ScenarioConfig, seed: u64) -> Result<fracprog::apps::PilotInstance, CliError> {
    let topo = topology(cfg, pilot::pilot_study_topology())?;
    Ok(generate_pilot_instance(&topo, cfg.get("antennas", 4)?, cfg.get("pilot_len", 4)?, cfg.get("pilot_power", 1.0)?, seed)?)
}

fn run_pilot(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    let inst = pilot_instance(cfg, seed)?;
    let orth = pilot::orthogonal_pilots(&inst, &mut substream(seed, 1))?;
    let rand = pilot::random_pilots(&inst, &mut substream(seed, 2))?;
    let mut run = SeedRun::default();
    for method in pick(cfg, &[Transform::Basic, Transform::Nonhomogeneous, Transform::Extrapolated])? {
        let s = pilot::solve_pilot_fpp(&inst, &orth, method, solver)?;
        let mse = pilot::channel_mse(&inst, &s.x)?;
        run.solved(seed, method.name(), mse, s.trace, format!("objective={}", sci(s.value)));
    }
    run.fixed(seed, "orthogonal", pilot::channel_mse(&inst, &orth)?, String::new());
    run.fixed(seed, "random", pilot::channel_mse(&inst, &rand)?, String::new());
    Ok(run)
}

fn run_beamform(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    let base = Topology { cells: 2, tx_power_dbm: 20.0, ..Topology::default() };
    let inst = generate_mimo(
        &topology(cfg, base)?,
        cfg.get("tx_antennas", 2)?,
        cfg.get("rx_antennas", 2)?,
        cfg.get("streams", 1)?,
        seed,
    )?;
    let v0 = beamforming::random_beams(&inst, &mut seeded(seed))?;
    let mut run = SeedRun::default();
    for method in pick(cfg, &[Transform::Wmmse, Transform::Fplinq])? {
        let s = beamforming::solve_beamforming(&inst, &v0, method, solver)?;
        let residual = beamforming::stationarity_residual(&inst, &s.v)?;
        run.solved(seed, method.name(), s.value, s.trace, format!("residual={}", sci(residual)));
    }
    Ok(run)
}

fn run_schedule(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    pick(cfg, &[Transform::Fplinq])?;
    let base = Topology { users_per_cell: 3, tx_power_dbm: 23.0, ..Topology::default() };
    let inst = generate_uplink(&topology(cfg, base)?, seed)?;
    let init = schedule::strongest_candidates(&inst)?;
    let s = schedule::schedule_uplink_fplinq(&inst, &init, solver)?;
    let mut run = SeedRun::default();
    run.solved(seed, "fplinq", s.value, s.trace, format!("{} p={}", labels_detail(&s.schedule).replace("labels", "schedule"), sci_list(&s.powers)));
    let full = vec![inst.power_cap; inst.cells()];
    run.fixed(seed, "strongest-full-power", schedule::scheduled_rate(&inst, &init, &full)?, labels_detail(&init).replace("labels", "schedule"));
    if cfg.oracle {
        let (best, p, v) = schedule::exhaustive_schedule(&inst, solver)?;
        run.fixed(seed, "exhaustive", v, format!("{} p={}", labels_detail(&best).replace("labels", "schedule"), sci_list(&p)));
    }
    Ok(run)
}

/// Least-squares slope of `ln(e_k)` against `ln(k)` over `k = 10..=200`.
pub fn loglog_slope(objectives: &[f64], best: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = (10..=200)
        .filter(|&k| k < objectives.len())
        .map(|k| ((k as f64).ln(), best - objectives[k]))
        .filter(|(_, e)| *e > 0.0)
        .map(|(x, e)| (x, e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn run_rates(cfg: &ScenarioConfig, seed: u64, solver: &SolverConfig) -> Result<SeedRun, CliError> {
    let inst = pilot_instance(cfg, seed)?;
    let init = pilot::random_pilots(&inst, &mut seeded(seed))?;
    let methods = pick(cfg, &[Transform::Basic, Transform::Nonhomogeneous, Transform::Extrapolated])?;
    let runs = methods
        .iter()
        .map(|m| pilot::solve_pilot_fpp(&inst, &init, *m, solver))
        .collect::<Result<Vec<_>, _>>()?;
    let best = runs.iter().flat_map(|r| r.trace.objectives()).fold(f64::NEG_INFINITY, f64::max);
    let mut run = SeedRun::default();
    for (m, s) in methods.iter().zip(runs) {
        let slope = loglog_slope(&s.trace.objectives(), best).map_or_else(|| "nan".into(), sci);
        run.solved(seed, m.name(), s.value, s.trace, format!("slope={slope}"));
    }
    Ok(run)
}

/// Whether any trace in the run hit a degenerate point.
pub fn degenerate(run: &SeedRun) -> bool {
    run.traces.iter().any(|(_, t)| t.status == Status::Degenerate)
}
