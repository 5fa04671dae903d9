//! Solver configuration, iteration traces and solutions.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::FpError;
pub use crate::problem::Sense;

/// Transform or algorithm variant selected by a solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transform {
    #[default]
    Quadratic,
    InverseQuadratic,
    AmGm,
    Dinkelbach,
    /// Matrix QT with exact (ellipsoid) x update.
    Basic,
    Nonhomogeneous,
    Extrapolated,
    Wmmse,
    Fplinq,
}

impl Transform {
    pub const ALL: [Transform; 9] = [
        Self::Quadratic,
        Self::InverseQuadratic,
        Self::AmGm,
        Self::Dinkelbach,
        Self::Basic,
        Self::Nonhomogeneous,
        Self::Extrapolated,
        Self::Wmmse,
        Self::Fplinq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Quadratic => "qt",
            Self::InverseQuadratic => "inverse-qt",
            Self::AmGm => "amgm",
            Self::Dinkelbach => "dinkelbach",
            Self::Basic => "basic",
            Self::Nonhomogeneous => "nonhomogeneous",
            Self::Extrapolated => "extrapolated",
            Self::Wmmse => "wmmse",
            Self::Fplinq => "fplinq",
        }
    }

    /// Variants whose traces are not required to be monotone.
    pub fn is_monotone(self) -> bool {
        self != Self::Extrapolated
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = FpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| FpError::InvalidConfig(format!("unknown variant `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once `|f(x_k) - f(x_{k-1})|` falls to this.
    pub obj_tol: f64,
    pub inner_tol: f64,
    pub seed: u64,
    pub variant: Transform,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iters: 500, obj_tol: 1e-8, inner_tol: 1e-10, seed: 0, variant: Transform::default() }
    }
}

impl SolverConfig {
    pub fn with_variant(mut self, variant: Transform) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_obj_tol(mut self, obj_tol: f64) -> Self {
        self.obj_tol = obj_tol;
        self
    }

    pub fn validate(&self) -> Result<(), FpError> {
        if self.max_iters < 1 {
            return Err(FpError::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.obj_tol > 0.0) || !(self.inner_tol > 0.0) {
            return Err(FpError::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIters,
    Degenerate,
    /// A clustering run could not keep every cluster populated.
    EmptyCluster,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIters => "max-iters",
            Self::Degenerate => "degenerate",
            Self::EmptyCluster => "empty-cluster",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterRecord {
    pub iter: usize,
    pub objective: f64,
    pub surrogate: f64,
    pub aux_norm: f64,
    pub elapsed_ms: f64,
}

/// Per-iteration history. Record 0 holds the starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    pub records: Vec<IterRecord>,
    pub status: Status,
    pub sense: Sense,
    pub variant: Transform,
}

impl SolverTrace {
    pub fn new(sense: Sense, variant: Transform) -> Self {
        Self { records: Vec::new(), status: Status::MaxIters, sense, variant }
    }

    pub fn objectives(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.objective).collect()
    }

    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn last_objective(&self) -> Option<f64> {
        self.records.last().map(|r| r.objective)
    }

    /// True when no step moves against the optimization sense by more than
    /// `slack * max(1, |f_prev|)`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.worst_violation() <= slack
    }

    /// Largest step against the sense, relative to `max(1, |f_prev|)`.
    pub fn worst_violation(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].objective, w[1].objective);
                let step = match self.sense {
                    Sense::Maximize => a - b,
                    Sense::Minimize => b - a,
                };
                step / a.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// Appends timed records to a trace.
#[derive(Debug)]
pub(crate) struct Recorder {
    pub trace: SolverTrace,
    start: Instant,
}

impl Recorder {
    pub fn new(sense: Sense, variant: Transform) -> Self {
        Self { trace: SolverTrace::new(sense, variant), start: Instant::now() }
    }

    pub fn push(&mut self, objective: f64, surrogate: f64, aux_norm: f64) {
        let iter = self.trace.records.len();
        let elapsed_ms = self.start.elapsed().as_secs_f64() * 1e3;
        self.trace.records.push(IterRecord { iter, objective, surrogate, aux_norm, elapsed_ms });
    }

    /// Whether the latest objective change is within `tol`.
    pub fn settled(&self, tol: f64) -> bool {
        match self.trace.records.as_slice() {
            [.., a, b] => (b.objective - a.objective).abs() <= tol,
            _ => false,
        }
    }

    pub fn finish(mut self, status: Status) -> SolverTrace {
        self.trace.status = status;
        self.trace
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub value: f64,
    pub trace: SolverTrace,
}

pub(crate) fn l2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}
