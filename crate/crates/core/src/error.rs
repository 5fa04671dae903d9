use thiserror::Error;

/// Errors raised by the problem model, transforms, and inner solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FpError {
    #[error("denominator {index} is degenerate at the evaluated point ({value:e})")]
    DegenerateDenominator { index: usize, value: f64 },

    #[error("argument {value:e} lies outside the domain of outer function {index}")]
    DomainError { index: usize, value: f64 },

    #[error("denominator matrix {index} is singular (min eigenvalue {min_eigenvalue:e})")]
    SingularDenominator { index: usize, min_eigenvalue: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("projection onto {0} is not supported here")]
    UnsupportedSet(&'static str),

    #[error("inner solver failed: {0}")]
    InnerSolverFailure(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("data points are not linearly separable")]
    NotSeparable,

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("bad topology: {0}")]
    BadTopology(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("wrong problem kind: expected {expected}, got {got}")]
    WrongKind {
        expected: &'static str,
        got: &'static str,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = FpError> = std::result::Result<T, E>;
