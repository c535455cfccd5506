//! Monte-Carlo separability lab: when does the factorized observable
//! `C * rho * G` track the exact golden-rule sum over discrete defects?
//!
//! The lab synthesises defect ensembles in a box (uniform or clustered),
//! evaluates both observables against a shared coupling kernel, and reports
//! the relative error across a density/clustering sweep.

pub mod field;
pub mod observable;
pub mod sweep;
pub mod synth;

pub use field::{kernel_integral, kernel_mean, BoxSpec, KernelField, KernelGrid};
pub use observable::{
    factorization_holds, factorized_observable, factorized_scalar, golden_rule_sum,
    relative_separability_error, SEPARABILITY_THRESHOLD,
};
pub use sweep::{dilution_sweep, write_sweep_csv, SweepConfig, SweepRow, SWEEP_HEADER};
pub use synth::{cell_seed, cluster_mean_size, cluster_sigma_m, synth, synth_neyman_scott, synth_poisson};

/// Errors from the separability lab.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error(
        "point [{x:e}, {y:e}, {z:e}] lies outside the box [0, {lx:e}] x [0, {ly:e}] x [0, {lz:e}]",
        x = point[0], y = point[1], z = point[2],
        lx = edges[0], ly = edges[1], lz = edges[2]
    )]
    OutsideBox { point: [f64; 3], edges: [f64; 3] },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("units: {0}")]
    Units(String),
    #[error("io: {0}")]
    Io(String),
}
