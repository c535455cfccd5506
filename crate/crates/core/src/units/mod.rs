//! Dimensional bookkeeping: exact SI dimension vectors, quantities with
//! uncertainties, unit parsing, pinned constants, and the per-channel closure
//! registry.

mod channel;
mod coherence;
pub mod constants;
mod dim;
mod parse;
mod quantity;

pub use channel::{
    channel_meta, check_closure, check_closure_by_name, check_closure_spec, closure_spec,
    ChannelClass, ChannelId, ChannelMeta, ClosureReport, ClosureSpec, DimFactor, Markovianity,
    ObservableKind,
};
pub use coherence::t2_from_t1_tphi;
pub use dim::{Dim, Exp, BASE_SYMBOLS};
pub use parse::{parse_unit, parse_value_with_unit, UnitExpr, PHI0_WB};
pub use quantity::Quantity;

/// Errors raised by dimensional bookkeeping and unit parsing.
#[derive(Debug, Clone, thiserror::Error)]
pub enum UnitsError {
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch { left: String, right: String, context: String },
    #[error("quantity value must be finite, got {value}")]
    NonFiniteValue { value: f64 },
    #[error("sigma must be finite and non-negative, got {sigma}")]
    InvalidSigma { sigma: f64 },
    #[error("division by zero quantity")]
    DivisionByZero,
    #[error("quantity must be dimensionless for {context}, got {dim}")]
    NotDimensionless { dim: String, context: String },
    #[error("{message}")]
    Domain { message: String },
    #[error("empty unit string")]
    EmptyUnit,
    #[error("unknown unit {token:?}")]
    UnknownUnit { token: String },
    #[error("malformed exponent in unit {unit:?}")]
    BadExponent { unit: String },
    #[error("malformed number {token:?}")]
    BadNumber { token: String },
    #[error("unknown channel {name:?}")]
    UnknownChannel { name: String },
    #[error("channel {name:?} is ambiguous; use IVa-QPTrap or IVb-QPEnv")]
    AmbiguousChannel { name: String },
}
