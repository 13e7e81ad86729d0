//! Front end for `fuchsforge-core`: the operator expression language, JSON
//! formats and the command implementations behind the `fuchsforge` binary.

pub mod commands;
pub mod dsl;
pub mod json;

use fuchsforge_core::Error;

pub use dsl::{evaluate, parse, parse_operator, print_text, Ast, ParseError};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const OBSTRUCTION: i32 = 4;
    pub const INTERNAL: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] dsl::FieldError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Field(_) | CliError::Input(_) => exit::PARSE,
            CliError::Core(Error::LogObstruction { .. }) => exit::OBSTRUCTION,
            CliError::Core(Error::Internal(_)) | CliError::Internal(_) => exit::INTERNAL,
            CliError::Core(_) | CliError::VerificationFailed(_) => exit::PRECONDITION,
        }
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse_error",
            CliError::Field(_) => "field_error",
            CliError::Input(_) => "invalid_input",
            CliError::VerificationFailed(_) => "verification_failed",
            CliError::Internal(_) => "internal",
            CliError::Core(e) => match e {
                Error::ZeroLeadingCoefficient => "zero_leading_coefficient",
                Error::DivisionByZero => "division_by_zero",
                Error::NotFuchsian => "not_fuchsian",
                Error::NegativeValuation(_) => "negative_valuation",
                Error::PrecisionExhausted(_) => "precision_exhausted",
                Error::InsufficientPrecision { .. } => "insufficient_precision",
                Error::NotCoprime => "not_coprime",
                Error::DegreeBound(_) => "degree_bound",
                Error::Resonant(_) => "resonant",
                Error::NotSplit => "not_split",
                Error::RootsMismatch => "roots_mismatch",
                Error::IndexOutOfRange { .. } => "index_out_of_range",
                Error::LogObstruction { .. } => "log_obstruction",
                Error::Precondition(_) => "precondition",
                Error::Internal(_) => "internal",
            },
        }
    }
}
