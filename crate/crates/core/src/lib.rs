//! Fractional programming solvers built around the quadratic transform.
//!
//! The crate covers single-ratio, max-min, sum-of-ratios, sum-of-functions
//! and sum-of-log-ratio problems, matrix ratios, and a set of wireless and
//! clustering applications assembled from those pieces.

pub mod apps;
pub mod error;
pub mod scalar;
pub mod inner;
pub mod ldt;
pub mod matrix;
pub mod problem;
pub mod rng;
pub mod solver;
pub mod textfmt;

pub use error::{FpError, Result};
pub use inner::{GoldenSection, InnerSolver, OracleResult, ProjectedGradient};
pub use problem::{
    evaluate_objective, validate_problem, ConstraintSet, Curvature, Diagnostic, FPProblem, Monotonicity,
    OuterFunction, OuterKind, ProblemKind, RatioSpec, Sense,
};
pub use solver::{IterRecord, Solution, SolverConfig, SolverTrace, Status, Transform};
