//! Scenario configuration: a `key = value` file with `[solver]`,
//! `[instance]` and `[output]` sections, overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fracprog::textfmt::KeyValueDoc;
use fracprog::{SolverConfig, Transform};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Ee,
    Svm,
    Aoi,
    Secrecy,
    Power,
    Ncut,
    Pilot,
    Beamform,
    Schedule,
    Rates,
}

impl Scenario {
    pub const ALL: [Scenario; 10] = [
        Self::Ee,
        Self::Svm,
        Self::Aoi,
        Self::Secrecy,
        Self::Power,
        Self::Ncut,
        Self::Pilot,
        Self::Beamform,
        Self::Schedule,
        Self::Rates,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::Ee => "ee",
            Self::Svm => "svm",
            Self::Aoi => "aoi",
            Self::Secrecy => "secrecy",
            Self::Power => "power",
            Self::Ncut => "ncut",
            Self::Pilot => "pilot",
            Self::Beamform => "beamform",
            Self::Schedule => "schedule",
            Self::Rates => "rates",
        }
    }

    /// Keys accepted in the `[instance]` section.
    fn instance_keys(self) -> Vec<&'static str> {
        const TOPOLOGY: [&str; 8] =
            ["cells", "users_per_cell", "isd_km", "min_dist_km", "shadowing_db", "tx_power_dbm", "noise_dbm", "pathloss_exponent"];
        let (topology, extra): (bool, &[&str]) = match self {
            Self::Ee => (false, &["gain", "noise", "circuit", "power_cap", "random"]),
            Self::Svm => (false, &["n", "gap", "dim", "points", "labels"]),
            Self::Aoi => (false, &["k", "mu", "grid_resolution"]),
            Self::Secrecy => (false, &["gains", "eve_gains", "noise", "eve_noise", "power_cap", "grid_resolution"]),
            Self::Power => (true, &["grid_points"]),
            Self::Ncut => (false, &["n", "graph"]),
            Self::Pilot | Self::Rates => (true, &["antennas", "pilot_len", "pilot_power"]),
            Self::Beamform => (true, &["tx_antennas", "rx_antennas", "streams"]),
            Self::Schedule => (true, &[]),
        };
        let base: &[&str] = if topology { &TOPOLOGY } else { &[] };
        base.iter().chain(extra).copied().collect()
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|t| t.tag() == s.trim())
            .ok_or_else(|| CliError::Config(format!("unknown scenario `{s}`")))
    }
}

/// Values given on the command line; each one overrides the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub variant: Option<String>,
    pub oracle: bool,
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub seeds: Vec<u64>,
    pub variant: Option<Transform>,
    pub oracle: bool,
    pub solver: SolverConfig,
    /// The `[instance]` section, validated against the scenario's keys.
    pub instance: KeyValueDoc,
    pub out_dir: PathBuf,
    /// Whether per-run trace CSVs are written.
    pub traces: bool,
}

const ROOT_KEYS: [&str; 4] = ["scenario", "seeds", "variant", "oracle"];
const SOLVER_KEYS: [&str; 3] = ["max_iters", "obj_tol", "inner_tol"];
const OUTPUT_KEYS: [&str; 2] = ["dir", "traces"];

fn config_err(e: fracprog::FpError) -> CliError {
    CliError::Config(e.to_string())
}

/// Scenario-specific solver defaults, applied before the `[solver]` section.
fn default_solver(scenario: Scenario) -> SolverConfig {
    let base = SolverConfig::default();
    match scenario {
        Scenario::Secrecy => base.with_obj_tol(1e-4),
        Scenario::Power => base.with_max_iters(20_000),
        Scenario::Beamform => base.with_max_iters(20_000).with_obj_tol(1e-13),
        Scenario::Schedule => base.with_max_iters(2000),
        Scenario::Rates => base.with_max_iters(2000).with_obj_tol(f64::MIN_POSITIVE),
        _ => base,
    }
}

impl ScenarioConfig {
    /// Defaults for `scenario`, seed 0, output in `out`.
    pub fn defaults(scenario: Scenario) -> Self {
        Self {
            scenario,
            seeds: vec![0],
            variant: None,
            oracle: false,
            solver: default_solver(scenario),
            instance: KeyValueDoc::new(),
            out_dir: PathBuf::from("out"),
            traces: true,
        }
    }

    /// Parses a config document for the scenario named by the subcommand.
    /// A document must name its scenario, and the name must match.
    pub fn from_doc(scenario: Scenario, doc: &KeyValueDoc) -> Result<Self, CliError> {
        let named: Scenario = doc
            .get("", "scenario")
            .ok_or_else(|| CliError::Config("config is missing the `scenario` key".into()))?
            .parse()?;
        if named != scenario {
            return Err(CliError::Config(format!("config is for scenario `{named}`, not `{scenario}`")));
        }
        let instance_keys = scenario.instance_keys();
        for section in doc.sections() {
            let allowed: &[&str] = match section {
                "" => &ROOT_KEYS,
                "solver" => &SOLVER_KEYS,
                "output" => &OUTPUT_KEYS,
                "instance" => &instance_keys,
                other => return Err(CliError::Config(format!("unknown section [{other}]"))),
            };
            if let Some(k) = doc.keys(section).find(|k| !allowed.contains(k)) {
                let at = if section.is_empty() { String::new() } else { format!(" in [{section}]") };
                return Err(CliError::Config(format!("unknown key `{k}`{at} for scenario `{scenario}`")));
            }
        }
        let mut cfg = Self::defaults(scenario);
        if let Some(seeds) = doc.list::<u64>("", "seeds").map_err(config_err)? {
            cfg.seeds = seeds;
        }
        if let Some(v) = doc.get("", "variant") {
            cfg.variant = Some(v.parse().map_err(config_err)?);
        }
        cfg.oracle = doc.value_or("", "oracle", false).map_err(config_err)?;
        let s = &mut cfg.solver;
        s.max_iters = doc.value_or("solver", "max_iters", s.max_iters).map_err(config_err)?;
        s.obj_tol = doc.value_or("solver", "obj_tol", s.obj_tol).map_err(config_err)?;
        s.inner_tol = doc.value_or("solver", "inner_tol", s.inner_tol).map_err(config_err)?;
        for key in doc.keys("instance") {
            cfg.instance.set("instance", key, doc.get("instance", key).unwrap_or_default());
        }
        if let Some(dir) = doc.get("output", "dir") {
            cfg.out_dir = PathBuf::from(dir);
        }
        cfg.traces = doc.value_or("output", "traces", true).map_err(config_err)?;
        Ok(cfg)
    }

    pub fn load(scenario: Scenario, path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let doc = KeyValueDoc::parse(&text).map_err(config_err)?;
        Self::from_doc(scenario, &doc)
    }

    /// File (if any), then flags.
    pub fn resolve(scenario: Scenario, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match &flags.config {
            Some(path) => Self::load(scenario, path)?,
            None => Self::defaults(scenario),
        };
        if let Some(seed) = flags.seed {
            cfg.seeds = vec![seed];
        }
        if let Some(out) = &flags.out {
            cfg.out_dir = out.clone();
        }
        if let Some(v) = &flags.variant {
            cfg.variant = Some(v.parse().map_err(config_err)?);
        }
        cfg.oracle |= flags.oracle;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.seeds.is_empty() {
            return Err(CliError::Config("`seeds` must list at least one seed".into()));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.seeds.len() {
            return Err(CliError::Config("`seeds` contains duplicates".into()));
        }
        self.solver.validate().map_err(config_err)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        self.instance.value_or("instance", key, default).map_err(config_err)
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError> {
        self.instance.list("instance", key).map_err(config_err)
    }

    /// Solver config for one seed.
    pub fn solver_for(&self, seed: u64) -> SolverConfig {
        SolverConfig { seed, ..self.solver.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> KeyValueDoc {
        KeyValueDoc::parse(text).unwrap()
    }

    #[test]
    fn reads_sections() {
        let d = doc("scenario = aoi\nseeds = 3,1\nvariant = amgm\n[solver]\nmax_iters = 7\n[instance]\nk = 4\n[output]\ndir = x\n");
        let c = ScenarioConfig::from_doc(Scenario::Aoi, &d).unwrap();
        assert_eq!(c.seeds, vec![3, 1]);
        assert_eq!(c.variant, Some(Transform::AmGm));
        assert_eq!(c.solver.max_iters, 7);
        assert_eq!(c.get("k", 0usize).unwrap(), 4);
        assert_eq!(c.out_dir, PathBuf::from("x"));
    }

    #[test]
    fn missing_scenario_is_config_error() {
        let e = ScenarioConfig::from_doc(Scenario::Aoi, &doc("seeds = 1\n")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("scenario"));
    }

    #[test]
    fn rejects_mismatch_and_unknown_keys() {
        assert!(ScenarioConfig::from_doc(Scenario::Ee, &doc("scenario = aoi\n")).is_err());
        assert!(ScenarioConfig::from_doc(Scenario::Aoi, &doc("scenario = aoi\n[instance]\ngain = 1\n")).is_err());
        assert!(ScenarioConfig::from_doc(Scenario::Aoi, &doc("scenario = aoi\n[extra]\na = 1\n")).is_err());
    }

    #[test]
    fn flags_override_file() {
        let flags = Overrides { seed: Some(9), variant: Some("amgm".into()), oracle: true, ..Overrides::default() };
        let c = ScenarioConfig::resolve(Scenario::Aoi, &flags).unwrap();
        assert_eq!(c.seeds, vec![9]);
        assert!(c.oracle);
        assert!(ScenarioConfig::resolve(Scenario::Aoi, &Overrides { variant: Some("nope".into()), ..Overrides::default() }).is_err());
    }

    #[test]
    fn empty_seed_list_rejected() {
        let d = doc("scenario = ee\nseeds =\n");
        let c = ScenarioConfig::from_doc(Scenario::Ee, &d).unwrap();
        assert!(c.validate().is_err());
    }
}
