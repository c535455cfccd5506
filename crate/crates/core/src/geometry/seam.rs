//! Seam admittance from a surface-current profile along a seam line.

use super::GeometryError;
use crate::numerics::CompensatedSum;
use crate::units::{Dim, Quantity};

/// Surface-current samples (s, J_s) along a seam, with `s` in metres and
/// `J_s` in A/m.
#[derive(Debug, Clone)]
pub struct SeamTrace {
    samples: Vec<(f64, f64)>,
}

impl SeamTrace {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, GeometryError> {
        if samples.len() < 2 {
            return Err(GeometryError::InvalidSeam(format!(
                "a seam trace needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        for (i, &(s, j)) in samples.iter().enumerate() {
            if !(s.is_finite() && j.is_finite()) {
                return Err(GeometryError::InvalidSeam(format!(
                    "sample {i} has a non-finite entry"
                )));
            }
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(GeometryError::InvalidSeam(format!(
                    "arclength must be strictly increasing; got {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn length(&self) -> f64 {
        self.samples.last().unwrap().0 - self.samples.first().unwrap().0
    }

    /// Trapezoid integral of J_s^2 over the seam, in A^2/m.
    pub fn integral_j_squared(&self) -> f64 {
        let mut sum = CompensatedSum::new();
        for w in self.samples.windows(2) {
            let (s0, j0) = w[0];
            let (s1, j1) = w[1];
            sum.add(0.5 * (s1 - s0) * (j0 * j0 + j1 * j1));
        }
        sum.value()
    }
}

/// Seam admittance per unit length divided out: the coupling functional
///
/// ```text
/// y_seam = (1 / (2 omega U)) * integral J_s^2 ds      [S/m]
/// ```
///
/// where `omega` is the angular mode frequency (1/s) and `u_stored` the
/// stored mode energy (J). The sigma of the result propagates the relative
/// sigmas of `omega` and `u_stored`; the trace itself is taken as exact.
pub fn y_seam(
    seam: &SeamTrace,
    omega: &Quantity,
    u_stored: &Quantity,
) -> Result<Quantity, GeometryError> {
    let per_time = Dim::TIME.recip();
    if omega.dim() != per_time {
        return Err(GeometryError::Units(format!(
            "omega must have dimension 1/s, got {}",
            omega.dim()
        )));
    }
    let energy = Dim::MASS * Dim::LENGTH.powi(2) / Dim::TIME.powi(2);
    if u_stored.dim() != energy {
        return Err(GeometryError::Units(format!(
            "stored energy must have dimension J, got {}",
            u_stored.dim()
        )));
    }
    if omega.value() <= 0.0 {
        return Err(GeometryError::InvalidSeam(format!(
            "omega must be positive, got {:e}",
            omega.value()
        )));
    }
    if u_stored.value() <= 0.0 {
        return Err(GeometryError::InvalidSeam(format!(
            "stored energy must be positive, got {:e}",
            u_stored.value()
        )));
    }
    // A^2/m as a dimension.
    let j2_dim = Dim::CURRENT.powi(2) / Dim::LENGTH;
    let integral = Quantity::exact(seam.integral_j_squared(), j2_dim);
    let denom = omega.mul(u_stored).scale(2.0);
    integral.div(&denom).map_err(GeometryError::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::parse_unit;
    use approx::assert_relative_eq;

    fn omega_u() -> (Quantity, Quantity) {
        let omega = Quantity::exact(2.0 * std::f64::consts::PI * 6.0e9, Dim::TIME.recip());
        let energy = Dim::MASS * Dim::LENGTH.powi(2) / Dim::TIME.powi(2);
        let u = Quantity::exact(1.0e-18, energy);
        (omega, u)
    }

    #[test]
    fn result_has_admittance_per_length_dimension() {
        let trace = SeamTrace::new(vec![(0.0, 1.0), (1.0e-3, 1.0)]).unwrap();
        let (omega, u) = omega_u();
        let y = y_seam(&trace, &omega, &u).unwrap();
        assert_eq!(y.dim(), parse_unit("S/m").unwrap().dim);
    }

    #[test]
    fn constant_current_profile_is_exact() {
        // For constant J_s = J0 over length L the trapezoid rule is exact:
        // y = J0^2 L / (2 omega U).
        let j0 = 2.5;
        let length = 4.0e-3;
        let trace = SeamTrace::new(vec![(0.0, j0), (length, j0)]).unwrap();
        let (omega, u) = omega_u();
        let y = y_seam(&trace, &omega, &u).unwrap();
        let expected = j0 * j0 * length / (2.0 * omega.value() * u.value());
        assert_relative_eq!(y.value(), expected, max_relative = 1e-15);
    }

    #[test]
    fn triangular_profile_matches_closed_form() {
        // J rises linearly 0 -> J0 over [0, L/2] and falls back to 0:
        // integral J^2 ds = J0^2 L / 3, so y = J0^2 L / (6 omega U).
        let j0 = 3.0;
        let length = 2.0e-3;
        let n = 2001;
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let s = length * i as f64 / (n - 1) as f64;
                let frac = s / length;
                let j = if frac <= 0.5 {
                    j0 * 2.0 * frac
                } else {
                    j0 * 2.0 * (1.0 - frac)
                };
                (s, j)
            })
            .collect();
        let trace = SeamTrace::new(samples).unwrap();
        let (omega, u) = omega_u();
        let y = y_seam(&trace, &omega, &u).unwrap();
        let expected = j0 * j0 * length / (6.0 * omega.value() * u.value());
        assert_relative_eq!(y.value(), expected, max_relative = 1e-5);
    }

    #[test]
    fn doubling_stored_energy_halves_admittance() {
        let trace = SeamTrace::new(vec![(0.0, 1.0), (0.5e-3, 2.0), (1.0e-3, 1.5)]).unwrap();
        let (omega, u) = omega_u();
        let u2 = u.scale(2.0);
        let y1 = y_seam(&trace, &omega, &u).unwrap();
        let y2 = y_seam(&trace, &omega, &u2).unwrap();
        assert_relative_eq!(y2.value(), y1.value() / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn propagates_relative_sigma_of_inputs() {
        let trace = SeamTrace::new(vec![(0.0, 1.0), (1.0e-3, 1.0)]).unwrap();
        let energy = Dim::MASS * Dim::LENGTH.powi(2) / Dim::TIME.powi(2);
        let omega = Quantity::new(1.0e10, 1.0e8, Dim::TIME.recip()).unwrap(); // 1%
        let u = Quantity::new(1.0e-18, 2.0e-20, energy).unwrap(); // 2%
        let y = y_seam(&trace, &omega, &u).unwrap();
        let expected_rel = (0.01_f64.powi(2) + 0.02_f64.powi(2)).sqrt();
        assert_relative_eq!(
            y.sigma() / y.value(),
            expected_rel,
            max_relative = 1e-6
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(SeamTrace::new(vec![(0.0, 1.0)]).is_err());
        assert!(SeamTrace::new(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(SeamTrace::new(vec![(0.0, f64::NAN), (1.0, 1.0)]).is_err());

        let trace = SeamTrace::new(vec![(0.0, 1.0), (1.0e-3, 1.0)]).unwrap();
        let (omega, u) = omega_u();
        // Wrong dimensions.
        assert!(y_seam(&trace, &u, &u).is_err());
        assert!(y_seam(&trace, &omega, &omega).is_err());
        // Non-positive values.
        let bad_omega = Quantity::exact(0.0, Dim::TIME.recip());
        assert!(y_seam(&trace, &bad_omega, &u).is_err());
    }
}
