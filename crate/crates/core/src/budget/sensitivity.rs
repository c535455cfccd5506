//! Geometric sensitivity sweeps and the qualitative co-optimization
//! conflict matrix.
//!
//! A sweep samples a coupling functional against one scalar design
//! parameter. Sensitivities are finite-difference slopes: central
//! differences in the interior, one-sided at the ends, exact on linear
//! data. The conflict matrix reduces each (parameter, channel) sweep to a
//! sign with a relative dead-band, then labels each parameter row by
//! whether the signs pull different channels in opposite directions.

use std::collections::BTreeMap;
use std::fmt;

use super::BudgetError;
use crate::units::{ChannelClass, Dim, Quantity};

/// Relative dead-band for conflict signs: a sweep whose total change is
/// below this fraction of the typical coupling magnitude counts as zero.
pub const CONFLICT_DEAD_BAND: f64 = 1e-3;

/// Samples of one coupling functional along one design parameter.
#[derive(Debug, Clone)]
pub struct SensitivitySweep {
    parameter: String,
    samples: Vec<(f64, Quantity)>,
}

impl SensitivitySweep {
    /// Builds a sweep. Requires at least two samples, finite strictly
    /// monotone parameter values, and one common coupling dimension.
    pub fn new(
        parameter: impl Into<String>,
        samples: Vec<(f64, Quantity)>,
    ) -> Result<SensitivitySweep, BudgetError> {
        let parameter = parameter.into();
        if parameter.trim().is_empty() {
            return Err(BudgetError::InvalidSweep(
                "parameter name must be non-empty".to_string(),
            ));
        }
        if samples.len() < 2 {
            return Err(BudgetError::InvalidSweep(format!(
                "sweep `{parameter}` needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        let mut direction = 0i8;
        for (i, (p, g)) in samples.iter().enumerate() {
            if !p.is_finite() || !g.value().is_finite() {
                return Err(BudgetError::InvalidSweep(format!(
                    "sweep `{parameter}`: sample {i} is not finite"
                )));
            }
            if g.dim() != samples[0].1.dim() {
                return Err(BudgetError::InvalidSweep(format!(
                    "sweep `{parameter}`: sample {i} dimension `{}` differs from `{}`",
                    g.dim(),
                    samples[0].1.dim()
                )));
            }
            if i > 0 {
                let step = p - samples[i - 1].0;
                let sign = if step > 0.0 {
                    1
                } else if step < 0.0 {
                    -1
                } else {
                    return Err(BudgetError::InvalidSweep(format!(
                        "sweep `{parameter}`: duplicate parameter value {p} at sample {i}"
                    )));
                };
                if direction == 0 {
                    direction = sign;
                } else if direction != sign {
                    return Err(BudgetError::InvalidSweep(format!(
                        "sweep `{parameter}`: parameter values must be strictly monotone"
                    )));
                }
            }
        }
        Ok(SensitivitySweep { parameter, samples })
    }

    pub fn parameter(&self) -> &str {
        &self.parameter
    }

    pub fn samples(&self) -> &[(f64, Quantity)] {
        &self.samples
    }

    fn coupling_dim(&self) -> Dim {
        self.samples[0].1.dim()
    }
}

/// Finite-difference slopes of one sweep.
#[derive(Debug, Clone)]
pub struct SensitivityTable {
    pub parameter: String,
    /// `(parameter value, dG/dp)` per sample point.
    pub slopes: Vec<(f64, Quantity)>,
    /// The slope of largest magnitude (sign preserved).
    pub peak_slope: Quantity,
}

/// Differentiates a sweep: central differences at interior samples,
/// one-sided differences at the two ends. Slope sigmas propagate from the
/// sample sigmas of the points each difference touches.
pub fn sensitivity(sweep: &SensitivitySweep) -> Result<SensitivityTable, BudgetError> {
    let s = &sweep.samples;
    let n = s.len();
    let dim = sweep.coupling_dim();
    let mut slopes = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = if i == 0 {
            (0, 1)
        } else if i == n - 1 {
            (n - 2, n - 1)
        } else {
            (i - 1, i + 1)
        };
        let dp = s[hi].0 - s[lo].0;
        let dg = s[hi].1.value() - s[lo].1.value();
        let sigma = s[hi].1.sigma().hypot(s[lo].1.sigma()) / dp.abs();
        slopes.push((s[i].0, Quantity::new(dg / dp, sigma, dim)?));
    }
    let peak = slopes
        .iter()
        .map(|(_, q)| *q)
        .max_by(|a, b| a.value().abs().total_cmp(&b.value().abs()))
        .expect("at least two samples");
    Ok(SensitivityTable { parameter: sweep.parameter.clone(), slopes, peak_slope: peak })
}

/// Row label in the conflict matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictLabel {
    /// The parameter drives some channels up and others down.
    TradeOff { increasing: ChannelClass, decreasing: ChannelClass },
    /// Every channel is insensitive to the parameter.
    FavorableNeutral,
    /// Every sensitive channel moves the same way.
    NoConflict { sign: i8 },
}

impl fmt::Display for ConflictLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConflictLabel::TradeOff { increasing, decreasing } => {
                write!(f, "Trade-off ({increasing} vs {decreasing})")
            }
            ConflictLabel::FavorableNeutral => f.write_str("Favorable/neutral"),
            ConflictLabel::NoConflict { sign } => {
                write!(f, "No conflict ({})", if *sign > 0 { "+" } else { "-" })
            }
        }
    }
}

/// One parameter's row: the per-channel signs and the row label.
#[derive(Debug, Clone)]
pub struct ConflictRow {
    pub parameter: String,
    pub signs: BTreeMap<ChannelClass, i8>,
    pub label: ConflictLabel,
}

/// The qualitative conflict matrix, one row per design parameter.
#[derive(Debug, Clone)]
pub struct ConflictMatrix {
    pub rows: Vec<ConflictRow>,
}

/// Reduces one sweep to a sign: the sign of dG/dp, zeroed when the total
/// relative change over the sweep is inside the dead-band.
fn sweep_sign(sweep: &SensitivitySweep) -> i8 {
    let s = &sweep.samples;
    let first = s.first().expect("validated");
    let last = s.last().expect("validated");
    let total_change = last.1.value() - first.1.value();
    let scale = s.iter().map(|(_, g)| g.value().abs()).sum::<f64>() / s.len() as f64;
    if scale == 0.0 || (total_change / scale).abs() < CONFLICT_DEAD_BAND {
        return 0;
    }
    let dp = last.0 - first.0;
    let slope = total_change / dp;
    if slope > 0.0 {
        1
    } else {
        -1
    }
}

/// Builds the conflict matrix from per-(channel, parameter) sweeps, rows
/// sorted by parameter name.
pub fn conflict_matrix(
    sweeps: &BTreeMap<(ChannelClass, String), SensitivitySweep>,
) -> Result<ConflictMatrix, BudgetError> {
    if sweeps.is_empty() {
        return Err(BudgetError::InvalidSweep(
            "conflict matrix needs at least one sweep".to_string(),
        ));
    }
    let mut by_parameter: BTreeMap<String, BTreeMap<ChannelClass, i8>> = BTreeMap::new();
    for ((class, parameter), sweep) in sweeps {
        if sweep.parameter() != parameter {
            return Err(BudgetError::InvalidSweep(format!(
                "sweep keyed under `{parameter}` is named `{}`",
                sweep.parameter()
            )));
        }
        by_parameter
            .entry(parameter.clone())
            .or_default()
            .insert(*class, sweep_sign(sweep));
    }
    let mut rows = Vec::new();
    for (parameter, signs) in by_parameter {
        let increasing = signs.iter().find(|(_, s)| **s > 0).map(|(c, _)| *c);
        let decreasing = signs.iter().find(|(_, s)| **s < 0).map(|(c, _)| *c);
        let label = match (increasing, decreasing) {
            (Some(up), Some(down)) => ConflictLabel::TradeOff { increasing: up, decreasing: down },
            (Some(_), None) => ConflictLabel::NoConflict { sign: 1 },
            (None, Some(_)) => ConflictLabel::NoConflict { sign: -1 },
            (None, None) => ConflictLabel::FavorableNeutral,
        };
        rows.push(ConflictRow { parameter, signs, label });
    }
    Ok(ConflictMatrix { rows })
}
