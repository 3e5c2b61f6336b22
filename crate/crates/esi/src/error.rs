use thiserror::Error;

/// Errors produced by the library and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received values violating its contract.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Two quantities that must share a time grid do not.
    #[error("time grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation normalized by the data norm received all-zero data.
    #[error("data trace has zero norm")]
    ZeroDataNorm,

    /// The penalty of the estimated wavelet vanished, so the weight update
    /// has no signal to work with (all data energy sits at zero lag).
    #[error("degenerate data: penalty term vanished during the weight update")]
    DegeneratePenalty,

    /// The misfit already exceeds the upper discrepancy bound; increasing
    /// the penalty weight can only push it higher.
    #[error("misfit {e:.6} exceeds the upper discrepancy bound {e_plus:.6}")]
    MisfitAboveUpperBound { e: f64, e_plus: f64 },

    /// The penalty-weight update did not reach the discrepancy interval.
    #[error("penalty weight update did not reach the discrepancy interval in {0} steps")]
    AlphaCycleStalled(usize),

    /// The alternating solver ran out of outer iterations.
    #[error("discrepancy solve did not converge within {0} outer iterations")]
    NoConvergence(usize),

    /// The root search could not drive the function below tolerance.
    #[error("root search stalled without satisfying the gradient tolerance")]
    RootSearchStalled,

    /// Configuration file problems (syntax, unknown keys, bad values).
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 validation, 2 solver, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Validation(_)
            | Error::GridMismatch(_)
            | Error::ZeroDataNorm
            | Error::Config(_) => 1,
            Error::DegeneratePenalty
            | Error::MisfitAboveUpperBound { .. }
            | Error::AlphaCycleStalled(_)
            | Error::NoConvergence(_)
            | Error::RootSearchStalled => 2,
            Error::Io(_) => 3,
        }
    }
}
