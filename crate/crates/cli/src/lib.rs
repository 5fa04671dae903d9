//! Scenario runner: resolves a config, fans seeds out to a worker pool and
//! writes trace CSVs, a summary CSV and a text table.

pub mod config;
pub mod output;
pub mod scenarios;

use std::fs;
use std::path::{Path, PathBuf};

use fracprog::FpError;
use rayon::prelude::*;
use thiserror::Error;

pub use config::{Overrides, Scenario, ScenarioConfig};
pub use output::{emit_trace_csv, parse_trace_csv, render_summary, render_table, SummaryRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Solver(#[from] FpError),

    #[error("solver degenerate: {0}")]
    Degenerate(String),
}

impl CliError {
    /// 2 for anything the config controls, 3 for numerical breakdown.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Degenerate(_) => 3,
            CliError::Solver(e) => match e {
                FpError::DegenerateDenominator { .. }
                | FpError::DomainError { .. }
                | FpError::SingularDenominator { .. }
                | FpError::InnerSolverFailure(_)
                | FpError::NotSeparable => 3,
                _ => 2,
            },
        }
    }
}

/// Everything a run produced, in seed order.
#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<SummaryRow>,
    pub summary_path: PathBuf,
    pub table: String,
    pub trace_paths: Vec<PathBuf>,
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Runs every seed, then writes the artifacts. A degenerate trace still
/// gets its artifacts written before the error is returned.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut seeds = cfg.seeds.clone();
    seeds.sort_unstable();
    log::info!("{}: {} seed(s) into {}", cfg.scenario, seeds.len(), cfg.out_dir.display());
    let runs = seeds
        .par_iter()
        .map(|&seed| scenarios::run_seed(cfg, seed).map(|r| (seed, r)))
        .collect::<Result<Vec<_>, _>>()?;

    fs::create_dir_all(&cfg.out_dir).map_err(io(&cfg.out_dir))?;
    let tag = cfg.scenario.tag();
    let mut trace_paths = Vec::new();
    if cfg.traces {
        for (seed, run) in &runs {
            for (method, trace) in &run.traces {
                let path = cfg.out_dir.join(format!("{tag}_seed{seed}_{method}.csv"));
                emit_trace_csv(trace, &path)?;
                trace_paths.push(path);
            }
        }
    }
    let rows: Vec<SummaryRow> = runs.iter().flat_map(|(_, r)| r.rows.iter().cloned()).collect();
    let summary_path = cfg.out_dir.join(format!("{tag}_summary.csv"));
    fs::write(&summary_path, render_summary(&rows)).map_err(io(&summary_path))?;
    let table = render_table(&format!("scenario {tag}"), &rows);
    let table_path = cfg.out_dir.join(format!("{tag}_table.txt"));
    fs::write(&table_path, &table).map_err(io(&table_path))?;

    if let Some((seed, _)) = runs.iter().find(|(_, r)| scenarios::degenerate(r)) {
        return Err(CliError::Degenerate(format!("seed {seed} stopped at a degenerate point")));
    }
    Ok(Report { rows, summary_path, table, trace_paths })
}
