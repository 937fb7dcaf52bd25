use thiserror::Error;

#[derive(Debug, Error)]
pub enum TfError {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    /// The shooting bracket does not straddle the target.
    #[error("bracketing failed: {0}")]
    Bracket(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    /// The grid error bar of a binding gap is not smaller than the gap.
    #[error("inconclusive sign: gap {gap:e} with error bar {error_bar:e}")]
    Inconclusive { gap: f64, error_bar: f64 },

    /// A fit window does not show the expected asymptotic behaviour.
    #[error("fit window outside the asymptotic regime: {0}")]
    OutsideRegime(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl TfError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        TfError::InvalidArgument(msg.into())
    }

    pub(crate) fn diverged(what: &'static str, detail: impl Into<String>) -> Self {
        TfError::NonConvergence {
            what,
            detail: detail.into(),
        }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            TfError::Bracket(_)
                | TfError::NonConvergence { .. }
                | TfError::IllConditioned(_)
                | TfError::Inconclusive { .. }
                | TfError::OutsideRegime(_)
        )
    }
}

pub type Result<T, E = TfError> = std::result::Result<T, E>;
