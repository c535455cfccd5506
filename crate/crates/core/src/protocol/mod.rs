//! Pre-committed 2x2 falsifiability protocol: predictions from the
//! factorized prescriptor, hash-sealing before data acquisition, row/column
//! ratio tests with propagated uncertainty, and a formal verdict.

pub mod design;
pub mod file;
pub mod ratio;
pub mod verdict;

pub use design::{
    commitment_bytes, predict, seal, CellId, Design, Measurements, Predictions, SealedDesign,
};
pub use file::{
    parse_design_text, parse_sealed_design_text, read_measurements_csv, seal_document,
    write_design_text, write_sealed_design_text, DesignDocument, MEASUREMENTS_HEADER,
};
pub use ratio::{evaluate_ratio_tests, Axis, RatioTest, SigmaMode, ZERO_SIGMA_RESIDUAL_FLOOR};
pub use verdict::{evaluate, verdict_from_tests, Evaluation, FalsifiedAxis, VerdictStatus};

/// Errors from the 2x2 protocol.
#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error("invalid measurements: {0}")]
    InvalidMeasurements(String),
    #[error(
        "protocol violation: design is not sealed; predictions must be \
         frozen before measurements are evaluated"
    )]
    Unsealed,
    #[error(
        "protocol violation: seal mismatch (stored {stored}, recomputed \
         {recomputed}); the design was modified after sealing"
    )]
    SealViolation { stored: String, recomputed: String },
    #[error("parse: {0}")]
    Parse(String),
    #[error("csv: {0}")]
    Csv(String),
}
