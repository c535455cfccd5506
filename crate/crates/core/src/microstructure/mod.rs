//! Materials-side statistics: curvature moments, RMS roughness, activated
//! loss-tangent models, and the predictor discrimination test.

pub mod csv;
mod curvature;
mod discriminate;
mod loss_model;
mod roughness;

pub use curvature::{
    curvature_moments, mu2, mu2_bootstrap, CurvatureMoments, CurvatureTrace,
};
pub use discriminate::{
    discriminate, DiscriminationConfig, DiscriminationReport, DiscriminationVerdict,
    SplitSample, SplitSeries,
};
pub use loss_model::{tan_delta_eff, LossModelForm, LossTangentModel};
pub use roughness::{rms_roughness, HeightProfile};

use crate::numerics::FitError;
use crate::units::UnitsError;

#[derive(Debug, thiserror::Error)]
pub enum MicrostructureError {
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Fit(#[from] FitError),
}
