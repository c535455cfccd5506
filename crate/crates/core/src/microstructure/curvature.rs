//! Edge-curvature statistics from cross-sectional metrology.
//!
//! A trace is a set of per-site curvature samples kappa(s) along an edge
//! perimeter of length L. The second moment
//!
//! ```text
//! mu2 = (1/L) * integral of kappa(s)^2 ds
//! ```
//!
//! is evaluated by trapezoidal quadrature on the sampled values. For
//! piecewise-constant kappa on grids whose panels either sit inside one
//! constant piece or bisect a jump, the quadrature is exact and refinement
//! does not change the value.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MicrostructureError;
use crate::numerics::{compensated_sum, sample_std, CompensatedSum};
use crate::units::{Dim, Quantity};

/// Curvature samples along an edge, ordered by arclength.
#[derive(Debug, Clone)]
pub struct CurvatureTrace {
    samples: Vec<(f64, f64)>,
    perimeter: f64,
}

impl CurvatureTrace {
    /// Build a trace from `(s, kappa)` samples in metres and 1/m.
    ///
    /// Requirements: at least 2 samples, arclengths strictly increasing and
    /// inside `[0, perimeter]`, all values finite, perimeter positive.
    pub fn new(
        samples: Vec<(f64, f64)>,
        perimeter: f64,
    ) -> Result<CurvatureTrace, MicrostructureError> {
        if !(perimeter.is_finite() && perimeter > 0.0) {
            return Err(MicrostructureError::InvalidTrace(format!(
                "perimeter must be positive and finite, got {perimeter}"
            )));
        }
        if samples.len() < 2 {
            return Err(MicrostructureError::TooFewSamples {
                got: samples.len(),
                need: 2,
            });
        }
        for (i, &(s, kappa)) in samples.iter().enumerate() {
            if !s.is_finite() || !kappa.is_finite() {
                return Err(MicrostructureError::InvalidTrace(format!(
                    "non-finite sample at index {i}"
                )));
            }
            // Tolerate rounding dust at the interval ends; exported grids
            // routinely land an ulp past L.
            let slack = perimeter * 1e-12;
            if s < -slack || s > perimeter + slack {
                return Err(MicrostructureError::InvalidTrace(format!(
                    "arclength {s} at index {i} outside [0, {perimeter}]"
                )));
            }
            if i > 0 && s <= samples[i - 1].0 {
                return Err(MicrostructureError::InvalidTrace(format!(
                    "arclengths must be strictly increasing; violated at index {i}"
                )));
            }
        }
        Ok(CurvatureTrace { samples, perimeter })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Trapezoid weight of each site (half panel on each side, half panels at
    /// the trace ends). Weights sum to the sampled span.
    pub fn site_weights(&self) -> Vec<f64> {
        let s: Vec<f64> = self.samples.iter().map(|p| p.0).collect();
        let n = s.len();
        let mut w = vec![0.0; n];
        w[0] = (s[1] - s[0]) / 2.0;
        w[n - 1] = (s[n - 1] - s[n - 2]) / 2.0;
        for i in 1..n - 1 {
            w[i] = (s[i + 1] - s[i - 1]) / 2.0;
        }
        w
    }

    fn weighted_power_sum(&self, power: i32) -> f64 {
        let weights = self.site_weights();
        let mut acc = CompensatedSum::new();
        for (&(_, kappa), &w) in self.samples.iter().zip(&weights) {
            acc.add(w * kappa.powi(power));
        }
        acc.value()
    }
}

/// Second curvature moment, 1/m^2 (exact quantity; see [`mu2_bootstrap`] for
/// a sigma estimate).
pub fn mu2(trace: &CurvatureTrace) -> Quantity {
    Quantity::exact(
        trace.weighted_power_sum(2) / trace.perimeter(),
        Dim::LENGTH.powi(-2),
    )
}

/// First four curvature moments. Only mu2 feeds any verdict downstream; the
/// others are descriptive.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureMoments {
    /// Mean curvature, 1/m.
    pub mu1: Quantity,
    /// Second moment, 1/m^2.
    pub mu2: Quantity,
    /// Third moment, 1/m^3.
    pub mu3: Quantity,
    /// Fourth moment, 1/m^4.
    pub mu4: Quantity,
}

pub fn curvature_moments(trace: &CurvatureTrace) -> CurvatureMoments {
    let l = trace.perimeter();
    let moment =
        |p: i32| Quantity::exact(trace.weighted_power_sum(p) / l, Dim::LENGTH.powi(-p));
    CurvatureMoments { mu1: moment(1), mu2: moment(2), mu3: moment(3), mu4: moment(4) }
}

/// mu2 with a site-level bootstrap sigma.
///
/// Sites are resampled with replacement keeping their original quadrature
/// weights; each replica statistic is the weight-normalized mean of kappa^2
/// rescaled by (span / perimeter). The reported value is the plain [`mu2`]
/// point estimate; sigma is the sample standard deviation of the replicas.
pub fn mu2_bootstrap(
    trace: &CurvatureTrace,
    n_resamples: usize,
    seed: u64,
) -> Result<Quantity, MicrostructureError> {
    if n_resamples < 100 {
        return Err(MicrostructureError::BadConfig(format!(
            "bootstrap needs at least 100 resamples, got {n_resamples}"
        )));
    }
    let n = trace.samples().len();
    if n < 2 {
        return Err(MicrostructureError::TooFewSamples { got: n, need: 2 });
    }
    let weights = trace.site_weights();
    let span: f64 = compensated_sum(weights.iter().copied());
    let scale = span / trace.perimeter();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut replicas = Vec::with_capacity(n_resamples);
    for _ in 0..n_resamples {
        let mut num = CompensatedSum::new();
        let mut den = CompensatedSum::new();
        for _ in 0..n {
            let idx = rng.random_range(0..n);
            let (_, kappa) = trace.samples()[idx];
            num.add(weights[idx] * kappa * kappa);
            den.add(weights[idx]);
        }
        if den.value() > 0.0 {
            replicas.push(num.value() / den.value() * scale);
        }
    }
    let sigma = sample_std(&replicas);
    let point = mu2(trace);
    Ok(Quantity::new(point.value(), sigma, point.dim())?)
}
