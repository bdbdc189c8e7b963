use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Locations are carried as `f64` regardless of the scalar type so the error
/// stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {point} lies outside the horizon (-{theta}, {theta})")]
    Horizon { point: f64, theta: f64 },

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("syntax error at offset {offset}: expected {}", expected.join(" | "))]
    Syntax { offset: usize, expected: Vec<String> },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdent { name: String, offset: usize },

    #[error("unbound variable `{0}`")]
    UnboundVariable(char),

    #[error("evaluation fault: {what} at {location}")]
    EvalFault { what: String, location: f64 },

    #[error("{0} is only weakly differentiable")]
    WeaklyDifferentiable(String),

    #[error("non-finite value ({what}) at t = {location}")]
    Numeric { what: String, location: f64 },

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("chain-rule witness not located between {lo} and {hi}")]
    WitnessNotLocated { lo: f64, hi: f64 },
}

impl Error {
    /// Short machine-readable tag, used by the CLI error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::Domain(_) => "domain",
            Error::Horizon { .. } => "horizon",
            Error::Overflow(_) => "overflow",
            Error::Syntax { .. } => "syntax",
            Error::UnknownIdent { .. } => "unknown_identifier",
            Error::UnboundVariable(_) => "unbound_variable",
            Error::EvalFault { .. } => "eval_fault",
            Error::WeaklyDifferentiable(_) => "weakly_differentiable",
            Error::Numeric { .. } => "numeric",
            Error::NonConvergence { .. } => "non_convergence",
            Error::WitnessNotLocated { .. } => "witness_not_located",
        }
    }

    /// Where the failure happened, when that is a point or an offset.
    pub fn location(&self) -> Option<f64> {
        match self {
            Error::Horizon { point, .. } => Some(*point),
            Error::Syntax { offset, .. } | Error::UnknownIdent { offset, .. } => Some(*offset as f64),
            Error::EvalFault { location, .. } | Error::Numeric { location, .. } => Some(*location),
            _ => None,
        }
    }
}
