//! Pre-committed 2x2 factorial designs and their sealed predictions.

use sha2::{Digest, Sha256};

use super::ProtocolError;
use crate::units::{closure_spec, ChannelId, Quantity};

/// Cell labels of the 2x2 design: rows a/b are the material (density)
/// treatments, columns A/B the geometry treatments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellId {
    Aa,
    Ab,
    Ba,
    Bb,
}

impl CellId {
    pub const ALL: [CellId; 4] = [CellId::Aa, CellId::Ab, CellId::Ba, CellId::Bb];

    /// The file/CSV label: row letter (a/b) then column letter (A/B).
    pub fn label(self) -> &'static str {
        match self {
            CellId::Aa => "aA",
            CellId::Ab => "aB",
            CellId::Ba => "bA",
            CellId::Bb => "bB",
        }
    }

    pub fn parse(label: &str) -> Result<Self, ProtocolError> {
        match label {
            "aA" => Ok(CellId::Aa),
            "aB" => Ok(CellId::Ab),
            "bA" => Ok(CellId::Ba),
            "bB" => Ok(CellId::Bb),
            other => Err(ProtocolError::InvalidDesign(format!(
                "unknown cell label `{other}` (expected aA, aB, bA or bB)"
            ))),
        }
    }
}

/// An unsealed 2x2 design: channel, tolerances, and the pre-committed
/// densities (rows), couplings (columns), and channel constant.
#[derive(Debug, Clone)]
pub struct Design {
    pub channel: ChannelId,
    /// Fractional tolerance on ratio residuals.
    pub epsilon: f64,
    /// Confidence level for the statistical gate, in (0, 1).
    pub confidence: f64,
    /// Commitment timestamp, recorded verbatim in the seal.
    pub committed_at: String,
    /// Channel constant C.
    pub c: Quantity,
    /// Density of material treatment a (row a).
    pub rho_a: Quantity,
    /// Density of material treatment b (row b).
    pub rho_b: Quantity,
    /// Coupling of geometry A (column A).
    pub g_a: Quantity,
    /// Coupling of geometry B (column B).
    pub g_b: Quantity,
}

impl Design {
    /// Validates tolerances, positivity, and dimensional closure of the
    /// channel chain C * rho * G against the channel registration.
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(ProtocolError::InvalidDesign(format!(
                "epsilon must be finite and positive, got {}",
                self.epsilon
            )));
        }
        if !(self.confidence.is_finite() && 0.0 < self.confidence && self.confidence < 1.0) {
            return Err(ProtocolError::InvalidDesign(format!(
                "confidence must lie strictly between 0 and 1, got {}",
                self.confidence
            )));
        }
        for (name, q) in [
            ("rho.a", &self.rho_a),
            ("rho.b", &self.rho_b),
            ("g.A", &self.g_a),
            ("g.B", &self.g_b),
        ] {
            if q.value() <= 0.0 {
                return Err(ProtocolError::InvalidDesign(format!(
                    "{name} must be positive, got {:e}",
                    q.value()
                )));
            }
        }
        if self.rho_a.dim() != self.rho_b.dim() {
            return Err(ProtocolError::InvalidDesign(format!(
                "rho.a and rho.b have different dimensions ({} vs {})",
                self.rho_a.dim(),
                self.rho_b.dim()
            )));
        }
        if self.g_a.dim() != self.g_b.dim() {
            return Err(ProtocolError::InvalidDesign(format!(
                "g.A and g.B have different dimensions ({} vs {})",
                self.g_a.dim(),
                self.g_b.dim()
            )));
        }
        let spec = closure_spec(self.channel);
        for (name, got, want) in [
            ("channel constant", self.c.dim(), spec.c.dim),
            ("density", self.rho_a.dim(), spec.rho.dim),
            ("coupling", self.g_a.dim(), spec.g.dim),
        ] {
            if got != want {
                return Err(ProtocolError::InvalidDesign(format!(
                    "channel {}: {name} must have dimension {want}, got {got}",
                    self.channel.label()
                )));
            }
        }
        Ok(())
    }

    fn rho_for(&self, cell: CellId) -> &Quantity {
        match cell {
            CellId::Aa | CellId::Ab => &self.rho_a,
            CellId::Ba | CellId::Bb => &self.rho_b,
        }
    }

    fn g_for(&self, cell: CellId) -> &Quantity {
        match cell {
            CellId::Aa | CellId::Ba => &self.g_a,
            CellId::Ab | CellId::Bb => &self.g_b,
        }
    }
}

/// The four predicted observables of a design, one per cell.
#[derive(Debug, Clone)]
pub struct Predictions {
    pub aa: Quantity,
    pub ab: Quantity,
    pub ba: Quantity,
    pub bb: Quantity,
}

impl Predictions {
    pub fn get(&self, cell: CellId) -> &Quantity {
        match cell {
            CellId::Aa => &self.aa,
            CellId::Ab => &self.ab,
            CellId::Ba => &self.ba,
            CellId::Bb => &self.bb,
        }
    }
}

/// Computes the four pre-committed predictions `O_mn = C * rho_m * G_n`
/// with first-order sigma propagation.
pub fn predict(design: &Design) -> Result<Predictions, ProtocolError> {
    design.validate()?;
    let cell = |id: CellId| design.c.mul(design.rho_for(id)).mul(design.g_for(id));
    Ok(Predictions {
        aa: cell(CellId::Aa),
        ab: cell(CellId::Ab),
        ba: cell(CellId::Ba),
        bb: cell(CellId::Bb),
    })
}

/// A design whose predictions have been computed and content-hashed.
/// Measurements may only be evaluated against a sealed design whose hash
/// still verifies.
#[derive(Debug, Clone)]
pub struct SealedDesign {
    pub design: Design,
    pub predictions: Predictions,
    /// Lowercase hex SHA-256 over the canonical commitment bytes.
    pub seal: String,
}

/// Canonical byte serialization of everything the seal commits to: the
/// design parameters and the four predictions, in fixed order, with values
/// and sigmas in shortest round-trip scientific notation and dimensions in
/// canonical display form. Unit spelling is deliberately excluded so that
/// rewriting `ms` as `1e-3 s` does not break the seal, while any change to
/// the physical content does.
pub fn commitment_bytes(design: &Design, predictions: &Predictions) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("prescriptor-2x2-commitment-v1\n");
    out.push_str(&format!("channel={}\n", design.channel.label()));
    out.push_str(&format!("epsilon={:e}\n", design.epsilon));
    out.push_str(&format!("confidence={:e}\n", design.confidence));
    out.push_str(&format!("committed_at={}\n", design.committed_at));
    let q = |name: &str, q: &Quantity| {
        format!("{name}={:e} {:e} {}\n", q.value(), q.sigma(), q.dim())
    };
    out.push_str(&q("c", &design.c));
    out.push_str(&q("rho.a", &design.rho_a));
    out.push_str(&q("rho.b", &design.rho_b));
    out.push_str(&q("g.A", &design.g_a));
    out.push_str(&q("g.B", &design.g_b));
    for cell in CellId::ALL {
        out.push_str(&q(
            &format!("prediction.{}", cell.label()),
            predictions.get(cell),
        ));
    }
    out.into_bytes()
}

/// Computes predictions and seals the design.
pub fn seal(design: Design) -> Result<SealedDesign, ProtocolError> {
    let predictions = predict(&design)?;
    let digest = Sha256::digest(commitment_bytes(&design, &predictions));
    Ok(SealedDesign {
        design,
        predictions,
        seal: hex::encode(digest),
    })
}

impl SealedDesign {
    /// Recomputes the commitment hash and checks it against the stored
    /// seal. Any mutation of the design or predictions after sealing makes
    /// this fail.
    pub fn verify(&self) -> Result<(), ProtocolError> {
        let digest = Sha256::digest(commitment_bytes(&self.design, &self.predictions));
        let expected = hex::encode(digest);
        if expected != self.seal {
            return Err(ProtocolError::SealViolation {
                stored: self.seal.clone(),
                recomputed: expected,
            });
        }
        Ok(())
    }
}

/// The four measured observables, one per cell, with sigmas.
#[derive(Debug, Clone)]
pub struct Measurements {
    pub aa: Quantity,
    pub ab: Quantity,
    pub ba: Quantity,
    pub bb: Quantity,
}

impl Measurements {
    pub fn get(&self, cell: CellId) -> &Quantity {
        match cell {
            CellId::Aa => &self.aa,
            CellId::Ab => &self.ab,
            CellId::Ba => &self.ba,
            CellId::Bb => &self.bb,
        }
    }

    /// All four measurements must share the predictions' dimension.
    pub fn check_dims(&self, predictions: &Predictions) -> Result<(), ProtocolError> {
        for cell in CellId::ALL {
            let got = self.get(cell).dim();
            let want = predictions.get(cell).dim();
            if got != want {
                return Err(ProtocolError::InvalidMeasurements(format!(
                    "cell {}: measured dimension {} does not match predicted {}",
                    cell.label(),
                    got,
                    want
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{parse_unit, Dim};
    use approx::assert_relative_eq;

    fn unit_design() -> Design {
        Design {
            channel: ChannelId::VPhonon,
            epsilon: 0.1,
            confidence: 0.95,
            committed_at: "2026-08-23T00:00:00Z".to_string(),
            c: Quantity::pure(1.0),
            rho_a: Quantity::pure(1.0),
            rho_b: Quantity::pure(2.0),
            g_a: Quantity::pure(3.0),
            g_b: Quantity::pure(4.0),
        }
    }

    #[test]
    fn predictions_follow_the_product_rule() {
        let p = predict(&unit_design()).unwrap();
        assert_relative_eq!(p.aa.value(), 3.0);
        assert_relative_eq!(p.ab.value(), 4.0);
        assert_relative_eq!(p.ba.value(), 6.0);
        assert_relative_eq!(p.bb.value(), 8.0);
    }

    #[test]
    fn zero_constant_zeroes_all_predictions() {
        let mut d = unit_design();
        d.c = Quantity::pure(0.0);
        let p = predict(&d).unwrap();
        for cell in CellId::ALL {
            assert_eq!(p.get(cell).value(), 0.0);
        }
    }

    #[test]
    fn seam_channel_predictions_are_dimensionless() {
        // Seam channel: rho is a seam resistance [ohm m], G a seam
        // admittance [S/m]; their product with C = 1 is a dimensionless
        // inverse quality factor.
        let d = Design {
            channel: ChannelId::IiiSeam,
            epsilon: 0.1,
            confidence: 0.95,
            committed_at: "t0".to_string(),
            c: Quantity::pure(1.0),
            rho_a: Quantity::new(2.0e-8, 1.0e-10, parse_unit("ohm m").unwrap().dim).unwrap(),
            rho_b: Quantity::new(5.0e-8, 2.0e-10, parse_unit("ohm m").unwrap().dim).unwrap(),
            g_a: Quantity::new(1.0e3, 5.0, parse_unit("S/m").unwrap().dim).unwrap(),
            g_b: Quantity::new(2.5e3, 9.0, parse_unit("S/m").unwrap().dim).unwrap(),
        };
        let p = predict(&d).unwrap();
        for cell in CellId::ALL {
            assert!(p.get(cell).is_dimensionless());
        }
        assert_relative_eq!(p.aa.value(), 2.0e-5, max_relative = 1e-12);
    }

    #[test]
    fn validation_catches_bad_designs() {
        let mut d = unit_design();
        d.epsilon = 0.0;
        assert!(d.validate().is_err());

        let mut d = unit_design();
        d.confidence = 1.0;
        assert!(d.validate().is_err());

        let mut d = unit_design();
        d.rho_a = Quantity::pure(-1.0);
        assert!(d.validate().is_err());

        // Mismatched dimensions between the two rows.
        let mut d = unit_design();
        d.rho_b = Quantity::exact(2.0, Dim::LENGTH);
        assert!(d.validate().is_err());

        // Channel registration mismatch: phonon channel wants everything
        // dimensionless.
        let mut d = unit_design();
        d.g_a = Quantity::exact(3.0, Dim::LENGTH);
        d.g_b = Quantity::exact(4.0, Dim::LENGTH);
        assert!(d.validate().is_err());
    }

    #[test]
    fn sealing_detects_tampering() {
        let sealed = seal(unit_design()).unwrap();
        sealed.verify().unwrap();

        let mut tampered = sealed.clone();
        tampered.design.rho_a = Quantity::pure(1.0000001);
        assert!(matches!(
            tampered.verify(),
            Err(ProtocolError::SealViolation { .. })
        ));

        let mut tampered = sealed.clone();
        tampered.predictions.bb = Quantity::pure(7.9);
        assert!(tampered.verify().is_err());

        let mut tampered = sealed.clone();
        tampered.design.committed_at.push('!');
        assert!(tampered.verify().is_err());

        let mut tampered = sealed;
        tampered.design.epsilon = 0.2;
        assert!(tampered.verify().is_err());
    }

    #[test]
    fn seal_is_deterministic() {
        let a = seal(unit_design()).unwrap();
        let b = seal(unit_design()).unwrap();
        assert_eq!(a.seal, b.seal);
        assert_eq!(a.seal.len(), 64);
    }

    #[test]
    fn cell_labels_round_trip() {
        for cell in CellId::ALL {
            assert_eq!(CellId::parse(cell.label()).unwrap(), cell);
        }
        assert!(CellId::parse("aC").is_err());
    }
}
