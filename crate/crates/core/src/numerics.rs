//! Small numeric helpers shared across modules: compensated summation,
//! ordinary least squares, and normal quantiles.

use statrs::distribution::{ContinuousCDF, Normal};

/// Neumaier (improved Kahan) compensated accumulator.
///
/// Quadrature sums over large grids must not depend on accumulation order at
/// the `1e-12` relative level; plain `f64` addition does not guarantee that.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Result of a univariate ordinary-least-squares fit `y = intercept + slope x`.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination of the fit.
    pub r_squared: f64,
}

/// Error cases for [`linear_fit`].
#[derive(Debug, Clone, thiserror::Error)]
pub enum FitError {
    #[error("need at least 2 points for a linear fit, got {0}")]
    TooFewPoints(usize),
    #[error("x and y lengths differ: {x} vs {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("regressor has zero variance; fit is rank deficient")]
    RankDeficient,
}

/// Ordinary least squares of `y` on `x`.
///
/// `r_squared` is `1 - SS_res / SS_tot`; when `y` has zero variance the fit is
/// an exact horizontal line and `r_squared` is reported as 1.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit, FitError> {
    if x.len() != y.len() {
        return Err(FitError::LengthMismatch { x: x.len(), y: y.len() });
    }
    if x.len() < 2 {
        return Err(FitError::TooFewPoints(x.len()));
    }
    let n = x.len() as f64;
    let mx = compensated_sum(x.iter().copied()) / n;
    let my = compensated_sum(y.iter().copied()) / n;
    let sxx = compensated_sum(x.iter().map(|&xi| (xi - mx) * (xi - mx)));
    let sxy = compensated_sum(x.iter().zip(y).map(|(&xi, &yi)| (xi - mx) * (yi - my)));
    let syy = compensated_sum(y.iter().map(|&yi| (yi - my) * (yi - my)));
    if sxx == 0.0 {
        return Err(FitError::RankDeficient);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res = compensated_sum(
            x.iter()
                .zip(y)
                .map(|(&xi, &yi)| {
                    let r = yi - (intercept + slope * xi);
                    r * r
                }),
        );
        1.0 - ss_res / syy
    };
    Ok(LinearFit { slope, intercept, r_squared })
}

/// Two-sided standard-normal quantile for a confidence level, e.g.
/// `0.95 -> 1.95996...`. Panics if `confidence` is outside `(0, 1)`.
pub fn z_two_sided(confidence: f64) -> f64 {
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must lie in (0, 1), got {confidence}"
    );
    let normal = Normal::standard();
    normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// One-sided standard-normal quantile, e.g. `0.95 -> 1.6448...`.
pub fn z_one_sided(confidence: f64) -> f64 {
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must lie in (0, 1), got {confidence}"
    );
    let normal = Normal::standard();
    normal.inverse_cdf(confidence)
}

/// Sample standard deviation (n-1 denominator). Returns 0 for fewer than two
/// samples.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    let ss = compensated_sum(values.iter().map(|&v| (v - mean) * (v - mean)));
    (ss / (n - 1.0)).sqrt()
}

/// Arithmetic mean; 0 for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    compensated_sum(values.iter().copied()) / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        // 1 + 1e-16 repeated: naive summation loses the small terms.
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-16);
        }
        assert_relative_eq!(acc.value(), 1.0 + 1000.0 * 1e-16, max_relative = 1e-15);
    }

    #[test]
    fn compensated_sum_is_order_insensitive() {
        let values: Vec<f64> = (0..10_000)
            .map(|i| (i as f64 * 0.7).sin() * 10f64.powi((i % 17) - 8))
            .collect();
        let forward = compensated_sum(values.iter().copied());
        let backward = compensated_sum(values.iter().rev().copied());
        assert_relative_eq!(forward, backward, max_relative = 1e-13);
    }

    #[test]
    fn linear_fit_exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|xi| 2.5 * xi - 1.0).collect();
        let fit = linear_fit(&x, &y).unwrap();
        assert_relative_eq!(fit.slope, 2.5, max_relative = 1e-14);
        assert_relative_eq!(fit.intercept, -1.0, max_relative = 1e-12);
        assert_relative_eq!(fit.r_squared, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn linear_fit_rejects_constant_x() {
        let x = [2.0, 2.0, 2.0];
        let y = [1.0, 2.0, 3.0];
        assert!(matches!(linear_fit(&x, &y), Err(FitError::RankDeficient)));
    }

    #[test]
    fn normal_quantiles_match_tables() {
        assert_relative_eq!(z_two_sided(0.95), 1.959964, max_relative = 1e-5);
        assert_relative_eq!(z_one_sided(0.95), 1.644854, max_relative = 1e-5);
        assert_relative_eq!(z_two_sided(0.99), 2.575829, max_relative = 1e-5);
    }

    #[test]
    fn sample_std_matches_hand_value() {
        // Values 1..5: mean 3, sum of squared deviations 10, std sqrt(10/4).
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_relative_eq!(sample_std(&v), (10.0f64 / 4.0).sqrt(), max_relative = 1e-14);
    }
}
