use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid level index {0}: levels start at 1")]
    InvalidLevel(usize),

    #[error("invalid width {0}: widths must be positive and finite")]
    InvalidWidth(f64),

    #[error("state is not normalized: sum |a_n|^2 = {norm_sq} (tolerance {tol:e})")]
    NotNormalized { norm_sq: f64, tol: f64 },

    #[error("probability weights invalid: {0}")]
    InvalidWeights(String),

    #[error("states live in different wells (widths {left} and {right})")]
    WidthMismatch { left: f64, right: f64 },

    #[error("target width {target} exceeds source width {source_width}")]
    TargetWiderThanSource { target: f64, source_width: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible: target second moment {target} is below the ground-level moment 1")]
    InfeasibleMoment { target: f64 },

    #[error("infeasible: width {requested} is below the minimum feasible width {minimum}")]
    InfeasibleWidth { requested: f64, minimum: f64 },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("state {label}: {source}")]
    Hypothesis {
        label: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn is_solver_failure(&self) -> bool {
        match self {
            Error::Solver(_) => true,
            Error::Hypothesis { source, .. } => source.is_solver_failure(),
            _ => false,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::InfeasibleMoment { .. } | Error::InfeasibleWidth { .. } => true,
            Error::Hypothesis { source, .. } => source.is_infeasible(),
            _ => false,
        }
    }
}
