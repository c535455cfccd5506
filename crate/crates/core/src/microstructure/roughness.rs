//! Edge height profiles and RMS roughness, the conventional geometry
//! statistic that the curvature moment competes against.

use super::MicrostructureError;
use crate::numerics::CompensatedSum;
use crate::units::{Dim, Quantity};

/// Height samples h(s) along an edge, metres over metres of arclength.
#[derive(Debug, Clone)]
pub struct HeightProfile {
    samples: Vec<(f64, f64)>,
}

impl HeightProfile {
    /// Requirements: at least 2 samples, strictly increasing arclengths,
    /// finite values.
    pub fn new(samples: Vec<(f64, f64)>) -> Result<HeightProfile, MicrostructureError> {
        if samples.len() < 2 {
            return Err(MicrostructureError::TooFewSamples { got: samples.len(), need: 2 });
        }
        for (i, &(s, h)) in samples.iter().enumerate() {
            if !s.is_finite() || !h.is_finite() {
                return Err(MicrostructureError::InvalidTrace(format!(
                    "non-finite sample at index {i}"
                )));
            }
            if i > 0 && s <= samples[i - 1].0 {
                return Err(MicrostructureError::InvalidTrace(format!(
                    "arclengths must be strictly increasing; violated at index {i}"
                )));
            }
        }
        Ok(HeightProfile { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    fn weights(&self) -> Vec<f64> {
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
}

/// Arclength-weighted RMS of the height about its arclength-weighted mean.
pub fn rms_roughness(profile: &HeightProfile) -> Quantity {
    let weights = profile.weights();
    let mut wsum = CompensatedSum::new();
    let mut hsum = CompensatedSum::new();
    for (&(_, h), &w) in profile.samples().iter().zip(&weights) {
        wsum.add(w);
        hsum.add(w * h);
    }
    let mean = hsum.value() / wsum.value();
    let mut ss = CompensatedSum::new();
    for (&(_, h), &w) in profile.samples().iter().zip(&weights) {
        let d = h - mean;
        ss.add(w * d * d);
    }
    Quantity::exact((ss.value() / wsum.value()).sqrt(), Dim::LENGTH)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn flat_profile_has_zero_roughness() {
        let profile =
            HeightProfile::new((0..20).map(|i| (i as f64, 3.0e-9)).collect()).unwrap();
        assert_eq!(rms_roughness(&profile).value(), 0.0);
        assert_eq!(rms_roughness(&profile).dim(), Dim::LENGTH);
    }

    #[test]
    fn square_wave_gives_amplitude() {
        // +-a with jump panels bisecting the transitions: RMS = a exactly.
        let a = 5e-9;
        let samples = vec![
            (0.0, a),
            (0.999, a),
            (1.001, -a),
            (2.0, -a),
        ];
        let profile = HeightProfile::new(samples).unwrap();
        assert_relative_eq!(rms_roughness(&profile).value(), a, max_relative = 1e-12);
    }

    #[test]
    fn sinusoid_gives_amplitude_over_sqrt2() {
        let a = 2e-9;
        let n = 2001;
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let s = 2.0 * PI * i as f64 / (n - 1) as f64;
                (s, a * s.sin())
            })
            .collect();
        let profile = HeightProfile::new(samples).unwrap();
        assert_relative_eq!(
            rms_roughness(&profile).value(),
            a / 2f64.sqrt(),
            max_relative = 1e-5
        );
    }

    #[test]
    fn offset_does_not_matter() {
        let samples: Vec<(f64, f64)> =
            (0..100).map(|i| (i as f64, ((i % 7) as f64) * 1e-9)).collect();
        let shifted: Vec<(f64, f64)> =
            samples.iter().map(|&(s, h)| (s, h + 4.2e-8)).collect();
        let p1 = HeightProfile::new(samples).unwrap();
        let p2 = HeightProfile::new(shifted).unwrap();
        assert_relative_eq!(
            rms_roughness(&p1).value(),
            rms_roughness(&p2).value(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn rejects_degenerate_profiles() {
        assert!(HeightProfile::new(vec![(0.0, 1.0)]).is_err());
        assert!(HeightProfile::new(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
    }
}
