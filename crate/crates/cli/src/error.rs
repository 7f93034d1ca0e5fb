use loopcoh_core::error::{AlgebraError, EmssError, FieldError, ThomError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error("unknown builtin `{0}` (known: {known})", known = crate::builtins::NAMES.join(", "))]
    UnknownBuiltin(String),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("{path}: {source}")]
    Algebra { path: String, source: AlgebraError },
    #[error("{path}: {source}")]
    Thom { path: String, source: ThomError },
    #[error("{path}: unknown generator `{name}`")]
    UnknownGenerator { path: String, name: String },
    #[error("{path}: `{key}` is not a valid operation index")]
    BadIndex { path: String, key: String },
    #[error("{path}: `{key}` is not a prime key")]
    BadPrimeKey { path: String, key: String },
    #[error("{path}: operation `{op}` does not act at characteristic {prime}")]
    WrongOperation { path: String, op: String, prime: u32 },
    #[error("bundle.orientation has no table for prime {0}")]
    MissingOrientation(u32),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("spec error: {0}")]
    Spec(#[from] SpecError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Usage(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<EmssError> for CliError {
    fn from(e: EmssError) -> Self {
        match e {
            EmssError::NonzeroEuler => CliError::Hypothesis(e.to_string()),
            EmssError::ExcludedPrimeSampled(_) => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}
