//! Exact and factorized observables over a defect ensemble, and the
//! separability comparison between them.

use super::field::{kernel_integral, BoxSpec, KernelField};
use super::LabError;
use crate::numerics::CompensatedSum;
use crate::units::{closure_spec, ChannelId, Quantity};

/// Exact microscopic observable per unit channel constant: the golden-rule
/// sum `sum_i K(r_i)` over defect positions (dimensionless).
pub fn golden_rule_sum(
    kernel: &KernelField,
    box_: &BoxSpec,
    defects: &[[f64; 3]],
) -> Result<f64, LabError> {
    let mut sum = CompensatedSum::new();
    for &p in defects {
        sum.add(kernel.value_at(box_, p)?);
    }
    Ok(sum.value())
}

/// Factorized observable per unit channel constant: `rho * integral K dV`
/// with the kernel integral evaluated by midpoint quadrature at
/// `resolution^3` cells. `rho` is the nominal (requested) defect density.
pub fn factorized_scalar(
    kernel: &KernelField,
    box_: &BoxSpec,
    density_per_m3: f64,
    resolution: usize,
) -> Result<f64, LabError> {
    if !(density_per_m3.is_finite() && density_per_m3 > 0.0) {
        return Err(LabError::InvalidConfig(format!(
            "density must be finite and positive, got {density_per_m3}"
        )));
    }
    Ok(density_per_m3 * kernel_integral(kernel, box_, resolution)?)
}

/// Relative separability error between the exact golden-rule sum and the
/// factorized observable:
///
/// ```text
/// rel_error = |o_exact - o_factorized| / |o_exact|
/// ```
///
/// Returns infinity when the exact observable vanishes while the factorized
/// one does not (a completely failed factorization), and zero when both
/// vanish.
pub fn relative_separability_error(o_exact: f64, o_factorized: f64) -> f64 {
    if o_exact == 0.0 {
        if o_factorized == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (o_exact - o_factorized).abs() / o_exact.abs()
    }
}

/// Default breakdown threshold for the factorization: relative errors
/// strictly above this flag the dilute approximation as broken.
pub const SEPARABILITY_THRESHOLD: f64 = 0.1;

/// True when the factorized observable still tracks the exact one, i.e. the
/// relative error does not exceed `threshold`.
pub fn factorization_holds(rel_error: f64, threshold: f64) -> bool {
    rel_error <= threshold
}

/// Dimension-checked factorized prescriptor for a registered channel:
/// `O = C * rho * G`, with each factor's dimension validated against the
/// channel's closure registration before multiplying.
pub fn factorized_observable(
    channel: ChannelId,
    c: &Quantity,
    rho: &Quantity,
    g: &Quantity,
) -> Result<Quantity, LabError> {
    let spec = closure_spec(channel);
    if c.dim() != spec.c.dim {
        return Err(LabError::Units(format!(
            "channel {}: constant must have dimension {}, got {}",
            channel.label(),
            spec.c.dim,
            c.dim()
        )));
    }
    if rho.dim() != spec.rho.dim {
        return Err(LabError::Units(format!(
            "channel {}: density must have dimension {}, got {}",
            channel.label(),
            spec.rho.dim,
            rho.dim()
        )));
    }
    if g.dim() != spec.g.dim {
        return Err(LabError::Units(format!(
            "channel {}: coupling must have dimension {}, got {}",
            channel.label(),
            spec.g.dim,
            g.dim()
        )));
    }
    Ok(c.mul(rho).mul(g))
}
