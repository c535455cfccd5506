//! Inverse coherence-budget design.
//!
//! Turns a target relaxation time into per-channel loss allowances, the
//! allowances into upper bounds on measurable materials state variables,
//! screens witness-sample measurements against those bounds, and ranks
//! geometric design parameters by how strongly they move each channel's
//! coupling functional — including the qualitative conflict matrix that
//! flags parameters helping one channel while hurting another.

mod feasibility;
mod file;
mod plan;
mod sensitivity;
mod share;

pub use feasibility::{
    feasibility, ChannelFeasibility, ChannelVerdict, FeasibilityReport,
    DIMINISHING_RETURNS_FRACTION,
};
pub use file::{
    parse_budget_path, parse_budget_text, read_measured_csv, read_measured_csv_path,
    render_feasibility_report, render_plan_report, write_budget_csv, write_budget_text,
    BUDGET_CSV_HEADER, MEASURED_CSV_HEADER,
};
pub use plan::{
    allowances, plan, preset_starting_point, rho_limit, total_rate, BudgetResult, BudgetSpec,
    ChannelCoupling,
};
pub use sensitivity::{
    conflict_matrix, sensitivity, ConflictLabel, ConflictMatrix, ConflictRow, SensitivitySweep,
    SensitivityTable, CONFLICT_DEAD_BAND,
};
pub use share::{format_share, parse_share, Share};

use crate::units::{ChannelClass, UnitsError};

/// Errors from budget planning, screening, and I/O.
#[derive(Debug, thiserror::Error)]
pub enum BudgetError {
    #[error("invalid budget spec: {0}")]
    InvalidSpec(String),

    #[error("invalid share `{text}`: {reason}")]
    InvalidShare { text: String, reason: String },

    #[error(
        "channel {channel}: no bridge from allowance dimension `{allowance_dim}` to \
         observable dimension `{observable_dim}`"
    )]
    NoBridge { channel: ChannelClass, allowance_dim: String, observable_dim: String },

    #[error("channel {channel}: a mode angular frequency is required to convert a rate \
             allowance to a quality-factor observable")]
    MissingOmega { channel: ChannelClass },

    #[error("invalid sensitivity sweep: {0}")]
    InvalidSweep(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("budget file: {0}")]
    Parse(String),

    #[error("budget csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Units(#[from] UnitsError),
}
