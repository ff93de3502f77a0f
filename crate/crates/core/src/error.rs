use thiserror::Error;

/// Errors raised by the rate computations and optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of a function.
    #[error("{function}: argument {value} outside domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A burst fraction leaves a negative signaling power after the processing cost.
    #[error("infeasible burst: theta={theta}, power={power}, eps={eps} gives negative signaling power")]
    InfeasibleBurst { theta: f64, power: f64, eps: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("objective has no feasible point on the grid")]
    NoFeasiblePoint,

    /// The scheme is only defined for a particular gain regime.
    #[error("{scheme} is not defined for this channel: {reason}")]
    Regime {
        scheme: &'static str,
        reason: String,
    },

    #[error("infeasible transmission profile: {0}")]
    InfeasibleProfile(String),

    /// A computed value broke a guaranteed relation such as `rate <= bound`.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, Error>;
