//! Curvature-activated loss-tangent models.
//!
//! Two phenomenological forms relate the intrinsic loss tangent to the
//! curvature moment:
//!
//! ```text
//! linear:       tan_delta_eff = tan_delta0 * (1 + alpha * mu2)
//! exponential:  tan_delta_eff = tan_delta0 * exp(beta * mu2)
//! ```
//!
//! `alpha` (or `beta`) carries m^2 so the activation argument is
//! dimensionless; both parameters and mu2 may carry uncertainties, which are
//! propagated to first order.

use super::MicrostructureError;
use crate::units::{Quantity, UnitsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossModelForm {
    Linear,
    Exponential,
}

/// A loss-tangent model: baseline plus curvature-activation coefficient.
#[derive(Debug, Clone, Copy)]
pub struct LossTangentModel {
    pub form: LossModelForm,
    /// Baseline loss tangent, dimensionless.
    pub tan_delta0: Quantity,
    /// Activation coefficient, m^2 (alpha for linear, beta for exponential).
    pub coeff: Quantity,
}

impl LossTangentModel {
    pub fn linear(tan_delta0: Quantity, alpha: Quantity) -> LossTangentModel {
        LossTangentModel { form: LossModelForm::Linear, tan_delta0, coeff: alpha }
    }

    pub fn exponential(tan_delta0: Quantity, beta: Quantity) -> LossTangentModel {
        LossTangentModel { form: LossModelForm::Exponential, tan_delta0, coeff: beta }
    }
}

/// Effective loss tangent at a given curvature moment.
///
/// Errors if the baseline is not dimensionless, if `coeff * mu2` is not
/// dimensionless, or if `mu2` is negative.
pub fn tan_delta_eff(
    model: &LossTangentModel,
    mu2: &Quantity,
) -> Result<Quantity, MicrostructureError> {
    if !model.tan_delta0.is_dimensionless() {
        return Err(UnitsError::NotDimensionless {
            dim: model.tan_delta0.dim().to_string(),
            context: "loss-tangent baseline".to_string(),
        }
        .into());
    }
    if mu2.value() < 0.0 {
        return Err(MicrostructureError::InvalidTrace(format!(
            "mu2 must be non-negative, got {}",
            mu2.value()
        )));
    }
    let activation = model.coeff.mul(mu2);
    if !activation.is_dimensionless() {
        return Err(UnitsError::NotDimensionless {
            dim: activation.dim().to_string(),
            context: "activation coeff * mu2".to_string(),
        }
        .into());
    }
    let result = match model.form {
        LossModelForm::Linear => {
            model.tan_delta0.mul(&Quantity::pure(1.0).add(&activation)?)
        }
        LossModelForm::Exponential => model.tan_delta0.mul(&activation.exp()?),
    };
    Ok(result)
}
