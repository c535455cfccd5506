//! Go/no-go feasibility screening of measured state variables against
//! back-calculated materials limits.
//!
//! Each channel passes when its measured value plus `k` standard deviations
//! sits at or below the limit, where `k` is the one-sided normal score for
//! the requested confidence. Channels without measurements are reported as
//! unknown rather than failed, and channels sitting far below their limit
//! are flagged as offering diminishing returns for further improvement.

// Guards are written `!(x >= 0.0)` rather than `x < 0.0` so NaN inputs are
// rejected along with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::fmt;

use super::plan::BudgetResult;
use super::BudgetError;
use crate::numerics::z_one_sided;
use crate::units::{ChannelClass, Quantity};

/// Measured value sits this far below the limit (as a fraction of the
/// limit) before further reduction is flagged as diminishing returns.
pub const DIMINISHING_RETURNS_FRACTION: f64 = 0.1;

/// Per-channel feasibility verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelVerdict {
    /// Measured value plus the confidence margin fits under the limit.
    Pass,
    /// Measured value plus the confidence margin exceeds the limit.
    NoGo,
    /// No measurement was supplied for this channel.
    Unknown,
}

impl fmt::Display for ChannelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelVerdict::Pass => "PASS",
            ChannelVerdict::NoGo => "NO-GO",
            ChannelVerdict::Unknown => "UNKNOWN",
        })
    }
}

/// One channel's screening line.
#[derive(Debug, Clone)]
pub struct ChannelFeasibility {
    pub class: ChannelClass,
    pub limit: Quantity,
    pub measured: Option<Quantity>,
    pub verdict: ChannelVerdict,
    /// `(measured + k * sigma) / limit`; above one means no-go.
    pub usage: Option<f64>,
    /// True when even the confidence-inflated measurement sits below a
    /// tenth of the limit, so further reduction buys little.
    pub diminishing_returns: bool,
}

/// The full screening report.
#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    pub confidence: f64,
    pub k_sigma: f64,
    pub channels: Vec<ChannelFeasibility>,
    /// The measured channel consuming the largest fraction of its limit.
    pub binding: Option<ChannelClass>,
    /// False when any measured channel is a no-go.
    pub go: bool,
}

/// Screens measured state variables against the planned limits. `measured`
/// may cover any subset of the channels with limits; absent channels come
/// back as unknown. Measurement dimensions must match the limit.
pub fn feasibility(
    result: &BudgetResult,
    measured: &BTreeMap<ChannelClass, Quantity>,
    confidence: f64,
) -> Result<FeasibilityReport, BudgetError> {
    if !(0.0 < confidence && confidence < 1.0) {
        return Err(BudgetError::InvalidSpec(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    for class in measured.keys() {
        if !result.rho_limits.contains_key(class) {
            return Err(BudgetError::InvalidMeasurement(format!(
                "channel {class}: measurement supplied but no limit was computed"
            )));
        }
    }
    let k = z_one_sided(confidence);
    let mut channels = Vec::new();
    let mut binding: Option<(ChannelClass, f64)> = None;
    let mut go = true;
    for (class, limit) in &result.rho_limits {
        let entry = match measured.get(class) {
            Some(m) => {
                if m.dim() != limit.dim() {
                    return Err(BudgetError::InvalidMeasurement(format!(
                        "channel {class}: measured dimension `{}` does not match limit `{}`",
                        m.dim(),
                        limit.dim()
                    )));
                }
                if !(m.value() >= 0.0) {
                    return Err(BudgetError::InvalidMeasurement(format!(
                        "channel {class}: measured value must be nonnegative, got {:e}",
                        m.value()
                    )));
                }
                let inflated = m.value() + k * m.sigma();
                let usage = inflated / limit.value();
                let verdict = if inflated <= limit.value() {
                    ChannelVerdict::Pass
                } else {
                    ChannelVerdict::NoGo
                };
                if verdict == ChannelVerdict::NoGo {
                    go = false;
                }
                match binding {
                    Some((_, best)) if best >= usage => {}
                    _ => binding = Some((*class, usage)),
                }
                ChannelFeasibility {
                    class: *class,
                    limit: *limit,
                    measured: Some(*m),
                    verdict,
                    usage: Some(usage),
                    diminishing_returns: inflated
                        <= DIMINISHING_RETURNS_FRACTION * limit.value(),
                }
            }
            None => ChannelFeasibility {
                class: *class,
                limit: *limit,
                measured: None,
                verdict: ChannelVerdict::Unknown,
                usage: None,
                diminishing_returns: false,
            },
        };
        channels.push(entry);
    }
    Ok(FeasibilityReport {
        confidence,
        k_sigma: k,
        channels,
        binding: binding.map(|(class, _)| class),
        go,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::super::plan::{plan, preset_starting_point, BudgetSpec, ChannelCoupling};
    use super::*;
    use crate::units::parse_unit;

    fn q(value: f64, sigma: f64, unit: &str) -> Quantity {
        let u = parse_unit(unit).unwrap();
        Quantity::new(value * u.factor, sigma * u.factor, u.dim).unwrap()
    }

    fn planned() -> BudgetResult {
        let mut spec = BudgetSpec {
            t1_target: q(1e-3, 0.0, "s"),
            allocations: preset_starting_point(),
            couplings: BTreeMap::new(),
            omega: Some(q(1e9, 0.0, "1/s")),
        };
        spec.couplings.insert(
            ChannelClass::I,
            ChannelCoupling {
                c: q(1e-3, 0.0, "1"),
                g: q(2e-10, 0.0, "m^2"),
                observable_allowance: None,
            },
        );
        spec.couplings.insert(
            ChannelClass::IV,
            ChannelCoupling {
                c: q(1.0, 0.0, "1"),
                g: q(1e-4, 0.0, "m^3/s"),
                observable_allowance: None,
            },
        );
        plan(&spec).unwrap()
    }

    #[test]
    fn zero_measurements_pass_every_measured_channel() {
        let result = planned();
        let measured = BTreeMap::from([
            (ChannelClass::I, q(0.0, 0.0, "1/m^2")),
            (ChannelClass::IV, q(0.0, 0.0, "1/m^3")),
        ]);
        let report = feasibility(&result, &measured, 0.95).unwrap();
        assert!(report.go);
        for ch in &report.channels {
            assert_eq!(ch.verdict, ChannelVerdict::Pass, "channel {}", ch.class);
        }
    }

    #[test]
    fn measurement_above_limit_is_a_no_go_naming_the_channel() {
        // Channel-I limit is 2e6 per m^2 here; measuring 3e6 breaks it.
        let result = planned();
        let measured = BTreeMap::from([
            (ChannelClass::I, q(3e6, 0.0, "1/m^2")),
            (ChannelClass::IV, q(1e5, 0.0, "1/m^3")),
        ]);
        let report = feasibility(&result, &measured, 0.95).unwrap();
        assert!(!report.go);
        assert_eq!(report.binding, Some(ChannelClass::I));
        let ch1 = report
            .channels
            .iter()
            .find(|c| c.class == ChannelClass::I)
            .unwrap();
        assert_eq!(ch1.verdict, ChannelVerdict::NoGo);
        assert!(ch1.usage.unwrap() > 1.0);
        let ch4 = report
            .channels
            .iter()
            .find(|c| c.class == ChannelClass::IV)
            .unwrap();
        assert_eq!(ch4.verdict, ChannelVerdict::Pass);
    }

    #[test]
    fn at_the_limit_with_uncertainty_fails_but_exact_passes() {
        let result = planned();
        let limit = result.rho_limits[&ChannelClass::I].value();
        let exactly = BTreeMap::from([(ChannelClass::I, q(limit, 0.0, "1/m^2"))]);
        let report = feasibility(&result, &exactly, 0.95).unwrap();
        assert_eq!(report.channels[0].verdict, ChannelVerdict::Pass);
        let with_sigma =
            BTreeMap::from([(ChannelClass::I, q(limit, 0.01 * limit, "1/m^2"))]);
        let report = feasibility(&result, &with_sigma, 0.95).unwrap();
        assert_eq!(report.channels[0].verdict, ChannelVerdict::NoGo);
    }

    #[test]
    fn missing_channels_come_back_unknown_not_failed() {
        let result = planned();
        let measured = BTreeMap::from([(ChannelClass::I, q(1e5, 0.0, "1/m^2"))]);
        let report = feasibility(&result, &measured, 0.95).unwrap();
        assert!(report.go);
        let ch4 = report
            .channels
            .iter()
            .find(|c| c.class == ChannelClass::IV)
            .unwrap();
        assert_eq!(ch4.verdict, ChannelVerdict::Unknown);
        assert!(ch4.usage.is_none());
    }

    #[test]
    fn far_below_the_limit_flags_diminishing_returns() {
        let result = planned();
        let limit = result.rho_limits[&ChannelClass::I].value();
        let measured =
            BTreeMap::from([(ChannelClass::I, q(limit / 100.0, 0.0, "1/m^2"))]);
        let report = feasibility(&result, &measured, 0.95).unwrap();
        assert!(report.channels[0].diminishing_returns);
        let near = BTreeMap::from([(ChannelClass::I, q(limit / 2.0, 0.0, "1/m^2"))]);
        let report = feasibility(&result, &near, 0.95).unwrap();
        assert!(!report.channels[0].diminishing_returns);
    }

    #[test]
    fn verdicts_are_invariant_under_unit_respelling() {
        let result = planned();
        // 1.5e6 per m^2 spelled as 1.5e-6 per um^2.
        let in_m = BTreeMap::from([(ChannelClass::I, q(1.5e6, 1e4, "1/m^2"))]);
        let in_um = BTreeMap::from([(ChannelClass::I, q(1.5e-6, 1e-8, "1/um^2"))]);
        let report_m = feasibility(&result, &in_m, 0.95).unwrap();
        let report_um = feasibility(&result, &in_um, 0.95).unwrap();
        assert_eq!(report_m.channels[0].verdict, report_um.channels[0].verdict);
        approx::assert_relative_eq!(
            report_m.channels[0].usage.unwrap(),
            report_um.channels[0].usage.unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn k_follows_the_one_sided_confidence_score() {
        let result = planned();
        let report = feasibility(&result, &BTreeMap::new(), 0.95).unwrap();
        approx::assert_relative_eq!(report.k_sigma, 1.6448536269514722, max_relative = 1e-9);
    }

    #[test]
    fn dimension_mismatch_and_unknown_channel_are_errors() {
        let result = planned();
        let wrong_dim = BTreeMap::from([(ChannelClass::I, q(1.0, 0.0, "1/m^3"))]);
        assert!(feasibility(&result, &wrong_dim, 0.95).is_err());
        let no_limit = BTreeMap::from([(ChannelClass::III, q(1.0, 0.0, "ohm m"))]);
        assert!(feasibility(&result, &no_limit, 0.95).is_err());
        assert!(feasibility(&result, &BTreeMap::new(), 1.5).is_err());
    }

    #[test]
    fn binding_channel_is_the_largest_limit_user() {
        let result = planned();
        let measured = BTreeMap::from([
            (ChannelClass::I, q(1e6, 0.0, "1/m^2")),  // usage 0.5 of 2e6
            (ChannelClass::IV, q(9e5, 0.0, "1/m^3")), // usage 0.9 of 1e6
        ]);
        let report = feasibility(&result, &measured, 0.95).unwrap();
        assert_eq!(report.binding, Some(ChannelClass::IV));
        assert!(report.go);
    }
}
