//! Coherence budgeting: total-rate computation, per-channel loss allowances,
//! and back-calculated materials limits.
//!
//! The budget is zero-sum: a target relaxation time fixes a total allowable
//! loss rate, allocation shares split that rate across the five channel
//! classes, and dividing each channel's allowance by its prefactor-coupling
//! product turns the allowance into an upper bound on the materials-side
//! state variable. Channels whose observable is a dimensionless inverse
//! quality factor need the declared mode angular frequency to bridge a rate
//! allowance to the observable (`Q_inv = rate / omega`).

// Guards are written `!(x > 0.0)` rather than `x <= 0.0` so NaN inputs are
// rejected along with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;

use num_rational::Ratio;

use super::share::{apply_share, format_share, Share};
use super::BudgetError;
use crate::units::{check_closure, closure_spec, ChannelClass, Dim, Quantity};

/// Per-channel prefactor/coupling pair, plus an optional allowance stated
/// directly in the channel's observable units (needed when no rate bridge
/// exists, e.g. a flux-noise allowance in Wb^2).
#[derive(Debug, Clone)]
pub struct ChannelCoupling {
    pub c: Quantity,
    pub g: Quantity,
    pub observable_allowance: Option<Quantity>,
}

/// A coherence budget: target relaxation time, exact allocation shares, and
/// whatever couplings are known. `omega` is the mode angular frequency in
/// rad/s; it is required when a channel with a dimensionless observable has
/// couplings and no direct observable allowance.
#[derive(Debug, Clone)]
pub struct BudgetSpec {
    pub t1_target: Quantity,
    pub allocations: BTreeMap<ChannelClass, Share>,
    pub couplings: BTreeMap<ChannelClass, ChannelCoupling>,
    pub omega: Option<Quantity>,
}

/// The planned budget: total rate, per-channel allowances and shares, the
/// unallocated margin, and whichever materials limits were computable.
#[derive(Debug, Clone)]
pub struct BudgetResult {
    pub gamma_total: Quantity,
    pub allowances: BTreeMap<ChannelClass, Quantity>,
    pub shares: BTreeMap<ChannelClass, Share>,
    pub margin_share: Share,
    pub margin_rate: Quantity,
    pub rho_limits: BTreeMap<ChannelClass, Quantity>,
    /// Channels whose limit could not be computed, with the reason
    /// (e.g. couplings not provided, or no rate-to-observable bridge).
    pub skipped: BTreeMap<ChannelClass, String>,
}

/// The illustrative starting-point allocation: 40% dielectric, 20% spin,
/// 20% seam, 10% quasiparticle, 10% phonon-plus-margin. Never a default;
/// callers opt in by name.
pub fn preset_starting_point() -> BTreeMap<ChannelClass, Share> {
    BTreeMap::from([
        (ChannelClass::I, Ratio::new(2, 5)),
        (ChannelClass::II, Ratio::new(1, 5)),
        (ChannelClass::III, Ratio::new(1, 5)),
        (ChannelClass::IV, Ratio::new(1, 10)),
        (ChannelClass::V, Ratio::new(1, 10)),
    ])
}

fn rate_dim() -> Dim {
    Dim::TIME.recip()
}

impl BudgetSpec {
    /// Checks the spec: positive target time in seconds, positive shares
    /// summing to at most one, couplings matching the registered dimensions,
    /// and a mode frequency wherever a dimensionless-observable channel
    /// needs the rate bridge.
    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.t1_target.dim() != Dim::TIME {
            return Err(BudgetError::InvalidSpec(format!(
                "t1_target must carry seconds, got `{}`",
                self.t1_target.dim()
            )));
        }
        if !(self.t1_target.value() > 0.0) || !self.t1_target.value().is_finite() {
            return Err(BudgetError::InvalidSpec(format!(
                "t1_target must be positive and finite, got {}",
                self.t1_target.value()
            )));
        }
        if self.allocations.is_empty() {
            return Err(BudgetError::InvalidSpec(
                "at least one allocation share is required".to_string(),
            ));
        }
        let mut total = Ratio::from_integer(0i64);
        for (class, share) in &self.allocations {
            if *share <= Ratio::from_integer(0) {
                return Err(BudgetError::InvalidSpec(format!(
                    "allocation for channel {class} must be positive, got {}",
                    format_share(*share)
                )));
            }
            total += share;
        }
        if total > Ratio::from_integer(1) {
            return Err(BudgetError::InvalidSpec(format!(
                "allocation shares sum to {} > 1",
                format_share(total)
            )));
        }
        if let Some(omega) = &self.omega {
            if omega.dim() != rate_dim() || !(omega.value() > 0.0) {
                return Err(BudgetError::InvalidSpec(format!(
                    "omega must be a positive rate in 1/s, got {:e} `{}`",
                    omega.value(),
                    omega.dim()
                )));
            }
        }
        for (class, coupling) in &self.couplings {
            let spec = closure_spec(class.representative());
            if coupling.c.dim() != spec.c.dim {
                return Err(BudgetError::InvalidSpec(format!(
                    "channel {class}: prefactor dimension `{}` does not match registered `{}`",
                    coupling.c.dim(),
                    spec.c.dim
                )));
            }
            if coupling.g.dim() != spec.g.dim {
                return Err(BudgetError::InvalidSpec(format!(
                    "channel {class}: coupling dimension `{}` does not match registered `{}`",
                    coupling.g.dim(),
                    spec.g.dim
                )));
            }
            if !(coupling.c.value() > 0.0) || !(coupling.g.value() > 0.0) {
                return Err(BudgetError::InvalidSpec(format!(
                    "channel {class}: prefactor and coupling must be positive"
                )));
            }
            if let Some(oa) = &coupling.observable_allowance {
                if oa.dim() != spec.o.dim {
                    return Err(BudgetError::InvalidSpec(format!(
                        "channel {class}: observable allowance dimension `{}` does not match \
                         registered observable `{}`",
                        oa.dim(),
                        spec.o.dim
                    )));
                }
                if !(oa.value() > 0.0) {
                    return Err(BudgetError::InvalidSpec(format!(
                        "channel {class}: observable allowance must be positive"
                    )));
                }
            } else if spec.o.dim.is_none() && self.omega.is_none() {
                return Err(BudgetError::MissingOmega { channel: *class });
            }
        }
        Ok(())
    }
}

/// Total allowable loss rate: the reciprocal of the target relaxation time,
/// with first-order sigma propagation.
pub fn total_rate(t1_target: &Quantity) -> Result<Quantity, BudgetError> {
    if t1_target.dim() != Dim::TIME {
        return Err(BudgetError::InvalidSpec(format!(
            "t1_target must carry seconds, got `{}`",
            t1_target.dim()
        )));
    }
    if !(t1_target.value() > 0.0) || !t1_target.value().is_finite() {
        return Err(BudgetError::InvalidSpec(format!(
            "t1_target must be positive and finite, got {}",
            t1_target.value()
        )));
    }
    Ok(t1_target.recip()?)
}

/// Splits the total rate across channels by the exact allocation shares.
/// Share arithmetic multiplies by the numerator before dividing by the
/// denominator, so integer budgets yield bit-exact allowances.
pub fn allowances(spec: &BudgetSpec) -> Result<BTreeMap<ChannelClass, Quantity>, BudgetError> {
    spec.validate()?;
    let gamma = total_rate(&spec.t1_target)?;
    let mut out = BTreeMap::new();
    for (class, share) in &spec.allocations {
        let value = apply_share(gamma.value(), *share);
        let sigma = apply_share(gamma.sigma(), *share);
        out.insert(*class, Quantity::new(value, sigma, gamma.dim())?);
    }
    Ok(out)
}

/// Back-calculates the materials limit for one channel: converts the
/// allowance to the channel's observable (directly when the dimensions
/// already match, through `O = rate / omega` for dimensionless observables)
/// and divides by the prefactor-coupling product.
pub fn rho_limit(
    class: ChannelClass,
    allowance: &Quantity,
    c: &Quantity,
    g: &Quantity,
    omega: Option<&Quantity>,
) -> Result<Quantity, BudgetError> {
    let spec = closure_spec(class.representative());
    let report = check_closure(class.representative());
    if !report.pass {
        return Err(BudgetError::InvalidSpec(format!(
            "channel {class}: dimensional closure fails with residual `{}`",
            report.residual
        )));
    }
    if c.dim() != spec.c.dim || g.dim() != spec.g.dim {
        return Err(BudgetError::InvalidSpec(format!(
            "channel {class}: prefactor/coupling dimensions (`{}`, `{}`) do not match \
             registered (`{}`, `{}`)",
            c.dim(),
            g.dim(),
            spec.c.dim,
            spec.g.dim
        )));
    }
    if !(c.value() > 0.0) || !(g.value() > 0.0) {
        return Err(BudgetError::InvalidSpec(format!(
            "channel {class}: prefactor and coupling must be positive"
        )));
    }
    if !(allowance.value() > 0.0) {
        return Err(BudgetError::InvalidSpec(format!(
            "channel {class}: allowance must be positive, got {:e}",
            allowance.value()
        )));
    }
    let observable_limit = if allowance.dim() == spec.o.dim {
        *allowance
    } else if spec.o.dim.is_none() && allowance.dim() == rate_dim() {
        let omega = omega.ok_or(BudgetError::MissingOmega { channel: class })?;
        if omega.dim() != rate_dim() || !(omega.value() > 0.0) {
            return Err(BudgetError::InvalidSpec(format!(
                "channel {class}: omega must be a positive rate in 1/s, got `{}`",
                omega.dim()
            )));
        }
        allowance.div(omega)?
    } else {
        return Err(BudgetError::NoBridge {
            channel: class,
            allowance_dim: allowance.dim().to_string(),
            observable_dim: spec.o.dim.to_string(),
        });
    };
    let limit = observable_limit.div(&c.mul(g))?;
    if limit.dim() != spec.rho.dim {
        return Err(BudgetError::InvalidSpec(format!(
            "channel {class}: computed limit dimension `{}` does not match registered \
             state-variable dimension `{}`",
            limit.dim(),
            spec.rho.dim
        )));
    }
    Ok(limit)
}

/// Plans the full budget: total rate, allowances, margin, and the materials
/// limits for every channel whose couplings allow one.
pub fn plan(spec: &BudgetSpec) -> Result<BudgetResult, BudgetError> {
    spec.validate()?;
    let gamma = total_rate(&spec.t1_target)?;
    let allow = allowances(spec)?;
    let mut allocated = Ratio::from_integer(0i64);
    for share in spec.allocations.values() {
        allocated += share;
    }
    let margin_share = Ratio::from_integer(1) - allocated;
    let margin_rate = Quantity::new(
        apply_share(gamma.value(), margin_share),
        apply_share(gamma.sigma(), margin_share),
        gamma.dim(),
    )?;

    let mut rho_limits = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    for class in ChannelClass::ALL {
        let Some(allowance) = allow.get(&class) else {
            continue;
        };
        let Some(coupling) = spec.couplings.get(&class) else {
            skipped.insert(class, "couplings not provided".to_string());
            continue;
        };
        let effective_allowance = coupling.observable_allowance.as_ref().unwrap_or(allowance);
        match rho_limit(class, effective_allowance, &coupling.c, &coupling.g, spec.omega.as_ref())
        {
            Ok(limit) => {
                rho_limits.insert(class, limit);
            }
            Err(BudgetError::NoBridge { allowance_dim, observable_dim, .. }) => {
                skipped.insert(
                    class,
                    format!(
                        "no bridge from allowance `{allowance_dim}` to observable \
                         `{observable_dim}`; provide an observable allowance"
                    ),
                );
            }
            Err(e) => return Err(e),
        }
    }

    Ok(BudgetResult {
        gamma_total: gamma,
        allowances: allow,
        shares: spec.allocations.clone(),
        margin_share,
        margin_rate,
        rho_limits,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::units::parse_unit;

    fn q(value: f64, sigma: f64, unit: &str) -> Quantity {
        let u = parse_unit(unit).unwrap();
        Quantity::new(value * u.factor, sigma * u.factor, u.dim).unwrap()
    }

    fn starting_point_spec() -> BudgetSpec {
        BudgetSpec {
            t1_target: q(1e-3, 0.0, "s"),
            allocations: preset_starting_point(),
            couplings: BTreeMap::new(),
            omega: None,
        }
    }

    #[test]
    fn one_millisecond_gives_exactly_one_thousand_per_second() {
        let gamma = total_rate(&q(1e-3, 0.0, "s")).unwrap();
        assert_eq!(gamma.value(), 1000.0);
        assert_eq!(gamma.dim(), rate_dim());
        let unit = total_rate(&q(1.0, 0.0, "s")).unwrap();
        assert_eq!(unit.value(), 1.0);
    }

    #[test]
    fn total_rate_propagates_sigma_like_a_reciprocal() {
        // d(1/t)/dt = -1/t^2, so sigma_rate = sigma_t / t^2:
        // 5 us on 50 us gives 5e-6 / 2.5e-9 = 2000 per second.
        let gamma = total_rate(&q(50e-6, 5e-6, "s")).unwrap();
        assert_relative_eq!(gamma.value(), 2.0e4, max_relative = 1e-12);
        assert_relative_eq!(gamma.sigma(), 2000.0, max_relative = 1e-12);
    }

    #[test]
    fn total_rate_rejects_nonpositive_and_wrong_dimension() {
        assert!(total_rate(&q(0.0, 0.0, "s")).is_err());
        assert!(total_rate(&q(-1.0, 0.0, "s")).is_err());
        assert!(total_rate(&q(1.0, 0.0, "m")).is_err());
    }

    #[test]
    fn starting_point_allocation_reproduces_the_published_allowance_table() {
        let result = plan(&starting_point_spec()).unwrap();
        assert_eq!(result.gamma_total.value(), 1000.0);
        let expect = [
            (ChannelClass::I, 400.0),
            (ChannelClass::II, 200.0),
            (ChannelClass::III, 200.0),
            (ChannelClass::IV, 100.0),
            (ChannelClass::V, 100.0),
        ];
        for (class, value) in expect {
            assert_eq!(result.allowances[&class].value(), value, "channel {class}");
            assert_eq!(result.allowances[&class].dim(), rate_dim());
        }
        assert_eq!(result.margin_share, Ratio::from_integer(0));
        assert_eq!(result.margin_rate.value(), 0.0);
    }

    #[test]
    fn budget_identity_sum_plus_margin_equals_total_exactly() {
        for (t1, allocations) in [
            (1e-3, preset_starting_point()),
            (2e-3, preset_starting_point()),
            (
                1e-3,
                BTreeMap::from([
                    (ChannelClass::I, Ratio::new(2i64, 5)),
                    (ChannelClass::II, Ratio::new(1, 5)),
                    (ChannelClass::III, Ratio::new(1, 5)),
                    (ChannelClass::IV, Ratio::new(1, 10)),
                ]),
            ),
        ] {
            let spec = BudgetSpec {
                t1_target: q(t1, 0.0, "s"),
                allocations,
                couplings: BTreeMap::new(),
                omega: None,
            };
            let result = plan(&spec).unwrap();
            let sum: f64 = result.allowances.values().map(Quantity::value).sum();
            assert_eq!(
                sum + result.margin_rate.value(),
                result.gamma_total.value(),
                "t1 = {t1}"
            );
        }
    }

    #[test]
    fn single_channel_at_full_share_takes_the_whole_budget() {
        let spec = BudgetSpec {
            t1_target: q(1e-3, 0.0, "s"),
            allocations: BTreeMap::from([(ChannelClass::I, Ratio::from_integer(1i64))]),
            couplings: BTreeMap::new(),
            omega: None,
        };
        let result = plan(&spec).unwrap();
        assert_eq!(result.allowances[&ChannelClass::I].value(), 1000.0);
        assert_eq!(result.margin_rate.value(), 0.0);
    }

    #[test]
    fn under_allocated_budget_reports_the_residual_margin() {
        // Shares summing to 9/10 leave 100 per second of margin at 1 ms.
        let spec = BudgetSpec {
            t1_target: q(1e-3, 0.0, "s"),
            allocations: BTreeMap::from([
                (ChannelClass::I, Ratio::new(2i64, 5)),
                (ChannelClass::II, Ratio::new(1, 5)),
                (ChannelClass::III, Ratio::new(1, 5)),
                (ChannelClass::IV, Ratio::new(1, 10)),
            ]),
            couplings: BTreeMap::new(),
            omega: None,
        };
        let result = plan(&spec).unwrap();
        assert_eq!(result.margin_share, Ratio::new(1, 10));
        assert_eq!(result.margin_rate.value(), 100.0);
    }

    #[test]
    fn over_allocated_or_nonpositive_shares_are_rejected() {
        let mut over = starting_point_spec();
        over.allocations.insert(ChannelClass::V, Ratio::new(1i64, 5));
        assert!(plan(&over).is_err());
        let mut zero = starting_point_spec();
        zero.allocations.insert(ChannelClass::V, Ratio::from_integer(0i64));
        assert!(plan(&zero).is_err());
    }

    #[test]
    fn allowances_scale_inversely_with_the_target_time() {
        let base = plan(&starting_point_spec()).unwrap();
        let mut doubled_spec = starting_point_spec();
        doubled_spec.t1_target = q(2e-3, 0.0, "s");
        let doubled = plan(&doubled_spec).unwrap();
        for class in ChannelClass::ALL {
            assert_eq!(
                doubled.allowances[&class].value(),
                base.allowances[&class].value() / 2.0,
                "channel {class}"
            );
        }
    }

    #[test]
    fn dielectric_limit_follows_from_hand_division() {
        // Observable allowance 4e-7 (inverse quality factor), prefactor
        // 1e-3 (loss tangent), coupling 2e-4 m^2: the hand division
        // 4e-7 / (1e-3 * 2e-4) = 2.0 per square metre.
        let limit = rho_limit(
            ChannelClass::I,
            &q(4e-7, 0.0, "1"),
            &q(1e-3, 0.0, "1"),
            &q(2e-4, 0.0, "m^2"),
            None,
        )
        .unwrap();
        assert_relative_eq!(limit.value(), 2.0, max_relative = 1e-12);
        assert_eq!(limit.dim(), parse_unit("1/m^2").unwrap().dim);
        // A much smaller edge-participation area tightens nothing: at
        // 2e-10 m^2 the same allowance admits 2e6 per square metre.
        let loose = rho_limit(
            ChannelClass::I,
            &q(4e-7, 0.0, "1"),
            &q(1e-3, 0.0, "1"),
            &q(2e-10, 0.0, "m^2"),
            None,
        )
        .unwrap();
        assert_relative_eq!(loose.value(), 2e6, max_relative = 1e-12);
    }

    #[test]
    fn rate_allowance_bridges_through_omega_for_quality_factor_channels() {
        // 400 per second at omega = 1e9 rad/s is the same observable
        // target as 4e-7 directly.
        let via_rate = rho_limit(
            ChannelClass::I,
            &q(400.0, 0.0, "1/s"),
            &q(1e-3, 0.0, "1"),
            &q(2e-4, 0.0, "m^2"),
            Some(&q(1e9, 0.0, "1/s")),
        )
        .unwrap();
        let direct = rho_limit(
            ChannelClass::I,
            &q(4e-7, 0.0, "1"),
            &q(1e-3, 0.0, "1"),
            &q(2e-4, 0.0, "m^2"),
            None,
        )
        .unwrap();
        assert_relative_eq!(via_rate.value(), direct.value(), max_relative = 1e-12);
        assert!(matches!(
            rho_limit(
                ChannelClass::I,
                &q(400.0, 0.0, "1/s"),
                &q(1e-3, 0.0, "1"),
                &q(2e-4, 0.0, "m^2"),
                None,
            ),
            Err(BudgetError::MissingOmega { channel: ChannelClass::I })
        ));
    }

    #[test]
    fn quasiparticle_limit_divides_the_rate_allowance_directly() {
        // 100 per second over a 1e-4 m^3/s collection product bounds the
        // density at 1e6 per cubic metre.
        let limit = rho_limit(
            ChannelClass::IV,
            &q(100.0, 0.0, "1/s"),
            &q(1.0, 0.0, "1"),
            &q(1e-4, 0.0, "m^3/s"),
            None,
        )
        .unwrap();
        assert_relative_eq!(limit.value(), 1e6, max_relative = 1e-12);
        assert_eq!(limit.dim(), parse_unit("1/m^3").unwrap().dim);
    }

    #[test]
    fn rate_allowance_over_coupling_product_matches_direct_division() {
        // Cross-check: the limit equals the plain quantity division of the
        // allowance by the prefactor-coupling product.
        let allowance = q(400.0, 0.0, "1/s");
        let c = q(1.0, 0.0, "1");
        let g = q(1e-4, 0.0, "m^3/s");
        let limit = rho_limit(ChannelClass::IV, &allowance, &c, &g, None).unwrap();
        let by_division = allowance.div(&c.mul(&g)).unwrap();
        assert_eq!(limit.value(), by_division.value());
        assert_relative_eq!(limit.value(), 4e6, max_relative = 1e-12);
        assert_eq!(limit.dim(), by_division.dim());
    }

    #[test]
    fn limit_is_linear_in_allowance_and_inverse_in_coupling() {
        let base = rho_limit(
            ChannelClass::IV,
            &q(100.0, 0.0, "1/s"),
            &q(1.0, 0.0, "1"),
            &q(1e-4, 0.0, "m^3/s"),
            None,
        )
        .unwrap();
        let double_allowance = rho_limit(
            ChannelClass::IV,
            &q(200.0, 0.0, "1/s"),
            &q(1.0, 0.0, "1"),
            &q(1e-4, 0.0, "m^3/s"),
            None,
        )
        .unwrap();
        assert_relative_eq!(double_allowance.value(), 2.0 * base.value(), max_relative = 1e-15);
        let tenfold_coupling = rho_limit(
            ChannelClass::IV,
            &q(100.0, 0.0, "1/s"),
            &q(1.0, 0.0, "1"),
            &q(1e-3, 0.0, "m^3/s"),
            None,
        )
        .unwrap();
        assert_relative_eq!(tenfold_coupling.value(), base.value() / 10.0, max_relative = 1e-15);
    }

    #[test]
    fn spin_channel_needs_an_observable_allowance() {
        // A rate allowance cannot be bridged to the flux-noise observable.
        let err = rho_limit(
            ChannelClass::II,
            &q(200.0, 0.0, "1/s"),
            &q(2e-3, 0.0, "J^2 T^-2"),
            &q(2e-9, 0.0, "T^2 A^-2 m^2"),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, BudgetError::NoBridge { channel: ChannelClass::II, .. }));
        // Stated directly in the observable, the division goes through:
        // 8e-18 / (2e-3 * 2e-9) = 2e-6 per square metre.
        let limit = rho_limit(
            ChannelClass::II,
            &q(8e-18, 0.0, "Wb^2"),
            &q(2e-3, 0.0, "J^2 T^-2"),
            &q(2e-9, 0.0, "T^2 A^-2 m^2"),
            None,
        )
        .unwrap();
        assert_relative_eq!(limit.value(), 2e-6, max_relative = 1e-12);
        assert_eq!(limit.dim(), parse_unit("1/m^2").unwrap().dim);
    }

    #[test]
    fn rho_limit_rejects_bad_couplings() {
        // Wrong coupling dimension for the channel.
        assert!(rho_limit(
            ChannelClass::I,
            &q(4e-7, 0.0, "1"),
            &q(1e-3, 0.0, "1"),
            &q(2e-4, 0.0, "m^3"),
            None,
        )
        .is_err());
        // Zero coupling.
        assert!(rho_limit(
            ChannelClass::I,
            &q(4e-7, 0.0, "1"),
            &q(1e-3, 0.0, "1"),
            &q(0.0, 0.0, "m^2"),
            None,
        )
        .is_err());
        // Nonpositive allowance.
        assert!(rho_limit(
            ChannelClass::I,
            &q(0.0, 0.0, "1"),
            &q(1e-3, 0.0, "1"),
            &q(2e-4, 0.0, "m^2"),
            None,
        )
        .is_err());
    }

    #[test]
    fn plan_computes_limits_where_couplings_exist_and_explains_the_rest() {
        let mut spec = starting_point_spec();
        spec.omega = Some(q(1e9, 0.0, "1/s"));
        spec.couplings.insert(
            ChannelClass::I,
            ChannelCoupling {
                c: q(1e-3, 0.0, "1"),
                g: q(2e-4, 0.0, "m^2"),
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
        spec.couplings.insert(
            ChannelClass::II,
            ChannelCoupling {
                c: q(2e-3, 0.0, "J^2 T^-2"),
                g: q(2e-9, 0.0, "T^2 A^-2 m^2"),
                observable_allowance: None,
            },
        );
        let result = plan(&spec).unwrap();
        // Channel I: 400/s over omega = 4e-7, over 2e-7 = 2.0 per m^2.
        assert_relative_eq!(
            result.rho_limits[&ChannelClass::I].value(),
            2.0,
            max_relative = 1e-12
        );
        // Channel IV: direct 100 / 1e-4 = 1e6 per m^3.
        assert_relative_eq!(
            result.rho_limits[&ChannelClass::IV].value(),
            1e6,
            max_relative = 1e-12
        );
        // Channel II has no rate bridge and is skipped with a reason.
        assert!(!result.rho_limits.contains_key(&ChannelClass::II));
        assert!(result.skipped[&ChannelClass::II].contains("no bridge"));
        // Channels without couplings are reported as such.
        assert!(result.skipped[&ChannelClass::III].contains("not provided"));
        assert!(result.skipped[&ChannelClass::V].contains("not provided"));
    }

    #[test]
    fn quality_factor_channel_couplings_without_omega_fail_validation() {
        let mut spec = starting_point_spec();
        spec.couplings.insert(
            ChannelClass::I,
            ChannelCoupling {
                c: q(1e-3, 0.0, "1"),
                g: q(2e-4, 0.0, "m^2"),
                observable_allowance: None,
            },
        );
        assert!(matches!(
            spec.validate(),
            Err(BudgetError::MissingOmega { channel: ChannelClass::I })
        ));
    }
}
