//! Predictor discrimination on a split-series experiment.
//!
//! Takes matched per-device rows (mu2, R_RMS, T1) and asks which geometry
//! statistic better explains the relaxation *rate*: the test regresses 1/T1
//! on each predictor and compares coefficients of determination. The verdict
//! is bootstrapped over rows so that "better" carries a confidence level:
//!
//! * `Supported`: delta = R2(mu2) - R2(R_RMS) is positive and its lower
//!   bootstrap confidence bound stays positive.
//! * `Falsified`: delta is non-positive on the full data.
//! * `Indeterminate`: delta is positive but the bootstrap interval reaches 0.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MicrostructureError;
use crate::numerics::linear_fit;
use crate::units::{Dim, Quantity};

/// One device/coupon row of the split-series.
#[derive(Debug, Clone)]
pub struct SplitSample {
    /// Curvature moment, 1/m^2.
    pub mu2: Quantity,
    /// RMS edge roughness, m.
    pub r_rms: Quantity,
    /// Relaxation time, s.
    pub t1: Quantity,
    /// Optional first curvature moment, 1/m.
    pub mu1: Option<Quantity>,
}

/// A validated split-series.
#[derive(Debug, Clone)]
pub struct SplitSeries {
    samples: Vec<SplitSample>,
    warnings: Vec<String>,
}

impl SplitSeries {
    /// Requirements: at least 4 rows; dimensions 1/m^2, m, s (and 1/m for
    /// mu1 when present); positive T1. A mu2 span below a factor of 3 is
    /// allowed but recorded as a warning, since it weakens the comparison.
    pub fn new(samples: Vec<SplitSample>) -> Result<SplitSeries, MicrostructureError> {
        if samples.len() < 4 {
            return Err(MicrostructureError::TooFewSamples { got: samples.len(), need: 4 });
        }
        for (i, row) in samples.iter().enumerate() {
            let checks = [
                ("mu2", row.mu2.dim(), Dim::LENGTH.powi(-2)),
                ("r_rms", row.r_rms.dim(), Dim::LENGTH),
                ("T1", row.t1.dim(), Dim::TIME),
            ];
            for (name, got, want) in checks {
                if got != want {
                    return Err(MicrostructureError::InvalidTrace(format!(
                        "row {i}: {name} has dimension {got}, expected {want}"
                    )));
                }
            }
            if let Some(mu1) = &row.mu1 {
                if mu1.dim() != Dim::LENGTH.recip() {
                    return Err(MicrostructureError::InvalidTrace(format!(
                        "row {i}: mu1 has dimension {}, expected 1/m",
                        mu1.dim()
                    )));
                }
            }
            if row.t1.value() <= 0.0 {
                return Err(MicrostructureError::InvalidTrace(format!(
                    "row {i}: T1 must be positive, got {}",
                    row.t1.value()
                )));
            }
        }
        let mut warnings = Vec::new();
        let mu2_min = samples.iter().map(|r| r.mu2.value()).fold(f64::INFINITY, f64::min);
        let mu2_max = samples.iter().map(|r| r.mu2.value()).fold(f64::NEG_INFINITY, f64::max);
        if !(mu2_min > 0.0 && mu2_max / mu2_min >= 3.0) {
            warnings.push(format!(
                "mu2 span {mu2_min:e}..{mu2_max:e} is below a factor of 3; \
                 discrimination power is limited"
            ));
        }
        Ok(SplitSeries { samples, warnings })
    }

    pub fn samples(&self) -> &[SplitSample] {
        &self.samples
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiscriminationConfig {
    pub confidence: f64,
    pub n_resamples: usize,
    pub seed: u64,
}

impl Default for DiscriminationConfig {
    fn default() -> Self {
        DiscriminationConfig { confidence: 0.95, n_resamples: 2000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscriminationVerdict {
    Supported,
    Falsified,
    Indeterminate,
}

impl std::fmt::Display for DiscriminationVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DiscriminationVerdict::Supported => "SUPPORTED",
            DiscriminationVerdict::Falsified => "FALSIFIED",
            DiscriminationVerdict::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DiscriminationReport {
    /// R^2 of 1/T1 against mu2.
    pub r2_mu2: f64,
    /// R^2 of 1/T1 against R_RMS.
    pub r2_rms: f64,
    /// R^2 of 1/T1 against mu1 when the series carries it. Descriptive only.
    pub r2_mu1: Option<f64>,
    /// r2_mu2 - r2_rms on the full data.
    pub delta_r2: f64,
    /// One-sided lower bootstrap bound of delta_r2 at `confidence`.
    pub delta_r2_lower: f64,
    pub verdict: DiscriminationVerdict,
    pub confidence: f64,
    pub n_resamples: usize,
    /// Number of bootstrap replicas that were non-degenerate.
    pub n_valid_resamples: usize,
    /// The regression target, stated explicitly: rates, not times.
    pub regression_target: &'static str,
    pub warnings: Vec<String>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = pos - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    }
}

/// Run the discrimination test.
pub fn discriminate(
    series: &SplitSeries,
    config: &DiscriminationConfig,
) -> Result<DiscriminationReport, MicrostructureError> {
    if !(config.confidence > 0.0 && config.confidence < 1.0) {
        return Err(MicrostructureError::BadConfig(format!(
            "confidence must lie in (0, 1), got {}",
            config.confidence
        )));
    }
    if config.n_resamples < 100 {
        return Err(MicrostructureError::BadConfig(format!(
            "bootstrap needs at least 100 resamples, got {}",
            config.n_resamples
        )));
    }
    let mu2: Vec<f64> = series.samples().iter().map(|r| r.mu2.value()).collect();
    let rrms: Vec<f64> = series.samples().iter().map(|r| r.r_rms.value()).collect();
    let rate: Vec<f64> = series.samples().iter().map(|r| 1.0 / r.t1.value()).collect();

    let r2_mu2 = linear_fit(&mu2, &rate)?.r_squared;
    let r2_rms = linear_fit(&rrms, &rate)?.r_squared;
    let r2_mu1 = if series.samples().iter().all(|r| r.mu1.is_some()) {
        let mu1: Vec<f64> =
            series.samples().iter().map(|r| r.mu1.as_ref().unwrap().value()).collect();
        Some(linear_fit(&mu1, &rate)?.r_squared)
    } else {
        None
    };
    let delta_r2 = r2_mu2 - r2_rms;

    let n = series.samples().len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut deltas = Vec::with_capacity(config.n_resamples);
    for _ in 0..config.n_resamples {
        let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let bx1: Vec<f64> = idx.iter().map(|&i| mu2[i]).collect();
        let bx2: Vec<f64> = idx.iter().map(|&i| rrms[i]).collect();
        let by: Vec<f64> = idx.iter().map(|&i| rate[i]).collect();
        match (linear_fit(&bx1, &by), linear_fit(&bx2, &by)) {
            (Ok(f1), Ok(f2)) => deltas.push(f1.r_squared - f2.r_squared),
            // Degenerate resample (a predictor collapsed to one value): skip.
            _ => continue,
        }
    }
    if deltas.len() < 100 {
        return Err(MicrostructureError::BadConfig(format!(
            "only {} non-degenerate bootstrap replicas; series too degenerate",
            deltas.len()
        )));
    }
    deltas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let delta_r2_lower = quantile(&deltas, 1.0 - config.confidence);

    let verdict = if delta_r2 <= 0.0 {
        DiscriminationVerdict::Falsified
    } else if delta_r2_lower > 0.0 {
        DiscriminationVerdict::Supported
    } else {
        DiscriminationVerdict::Indeterminate
    };

    Ok(DiscriminationReport {
        r2_mu2,
        r2_rms,
        r2_mu1,
        delta_r2,
        delta_r2_lower,
        verdict,
        confidence: config.confidence,
        n_resamples: config.n_resamples,
        n_valid_resamples: deltas.len(),
        regression_target: "1/T1",
        warnings: series.warnings().to_vec(),
    })
}
