use std::fmt;

use serde::Serialize;

/// Anything that stops a command, with the exit code it maps to.
#[derive(Debug, Clone)]
pub enum Failure {
    Lib(powerq::Error),
    Usage(String),
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error_kind: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    location: Option<f64>,
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.kind(),
            Failure::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> i32 {
        use powerq::Error::*;
        match self {
            Failure::Usage(_) => 2,
            Failure::Lib(e) => match e {
                InvalidParams(_) | Domain(_) | Horizon { .. } => 2,
                Overflow(_) | Numeric { .. } | NonConvergence { .. } | WitnessNotLocated { .. } => 3,
                Syntax { .. } | UnknownIdent { .. } | UnboundVariable(_) | EvalFault { .. } | WeaklyDifferentiable(_) => 4,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let location = match self {
            Failure::Lib(e) => e.location(),
            Failure::Usage(_) => None,
        };
        let report = ErrorReport { error_kind: self.kind(), message: self.to_string(), location };
        serde_json::to_string(&report).unwrap_or_else(|_| format!("{{\"error_kind\":\"{}\"}}", self.kind()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => e.fmt(f),
            Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<powerq::Error> for Failure {
    fn from(e: powerq::Error) -> Self {
        Failure::Lib(e)
    }
}
