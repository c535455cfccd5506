//! Error-to-exit-code mapping.
//!
//! Exit codes: 0 success, 1 domain error (bad data, infeasible request),
//! 2 usage error (handled by the argument parser), 3 protocol violation
//! (evaluating against an unsealed or tampered design).

use prescriptor_core::budget::BudgetError;
use prescriptor_core::geometry::GeometryError;
use prescriptor_core::lab::LabError;
use prescriptor_core::microstructure::MicrostructureError;
use prescriptor_core::protocol::ProtocolError;
use prescriptor_core::units::UnitsError;

pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PROTOCOL: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn domain(message: impl Into<String>) -> CliError {
        CliError { code: EXIT_DOMAIN, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

macro_rules! domain_error {
    ($($ty:ty),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> CliError {
                CliError::domain(e.to_string())
            }
        })*
    };
}

domain_error!(
    BudgetError,
    GeometryError,
    LabError,
    MicrostructureError,
    UnitsError,
    std::io::Error
);

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> CliError {
        let code = match e {
            ProtocolError::Unsealed | ProtocolError::SealViolation { .. } => EXIT_PROTOCOL,
            _ => EXIT_DOMAIN,
        };
        CliError { code, message: e.to_string() }
    }
}
