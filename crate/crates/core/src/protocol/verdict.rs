//! Formal verdicts over the four ratio tests.

use super::design::{Measurements, SealedDesign};
use super::ratio::{evaluate_ratio_tests, Axis, RatioTest, SigmaMode};
use super::ProtocolError;
use crate::numerics::z_two_sided;

/// Which axis of the factorization failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FalsifiedAxis {
    Row,
    Column,
    Both,
}

impl FalsifiedAxis {
    pub fn label(self) -> &'static str {
        match self {
            FalsifiedAxis::Row => "row",
            FalsifiedAxis::Column => "column",
            FalsifiedAxis::Both => "both",
        }
    }
}

/// The protocol outcome.
///
/// Precedence: wide uncertainty wins. A design whose intervals cannot
/// resolve the tolerance at the stated confidence is Indeterminate even if
/// some point estimates look discrepant - an under-powered experiment can
/// neither support nor falsify the factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Supported,
    Falsified(FalsifiedAxis),
    Indeterminate,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerdictStatus::Supported => write!(f, "Supported"),
            VerdictStatus::Falsified(axis) => write!(f, "Falsified({})", axis.label()),
            VerdictStatus::Indeterminate => write!(f, "Indeterminate"),
        }
    }
}

/// A fully evaluated design: the four ratio tests plus the verdict and the
/// gates they were judged against.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub tests: Vec<RatioTest>,
    pub status: VerdictStatus,
    pub epsilon: f64,
    pub confidence: f64,
    pub z_critical: f64,
}

/// Derives the verdict from evaluated tests.
pub fn verdict_from_tests(tests: &[RatioTest]) -> VerdictStatus {
    if tests.iter().any(|t| t.low_power) {
        return VerdictStatus::Indeterminate;
    }
    let row_failed = tests.iter().any(|t| t.axis == Axis::Row && !t.pass);
    let column_failed = tests.iter().any(|t| t.axis == Axis::Column && !t.pass);
    match (row_failed, column_failed) {
        (false, false) => VerdictStatus::Supported,
        (true, false) => VerdictStatus::Falsified(FalsifiedAxis::Row),
        (false, true) => VerdictStatus::Falsified(FalsifiedAxis::Column),
        (true, true) => VerdictStatus::Falsified(FalsifiedAxis::Both),
    }
}

/// Evaluates a sealed design against measurements and returns the tests and
/// the verdict. Refuses tampered or unsealed designs.
pub fn evaluate(
    sealed: &SealedDesign,
    measurements: &Measurements,
    mode: SigmaMode,
) -> Result<Evaluation, ProtocolError> {
    let tests = evaluate_ratio_tests(sealed, measurements, mode)?;
    let status = verdict_from_tests(&tests);
    Ok(Evaluation {
        status,
        epsilon: sealed.design.epsilon,
        confidence: sealed.design.confidence,
        z_critical: z_two_sided(sealed.design.confidence),
        tests,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::design::{seal, Design, Measurements};
    use crate::units::{ChannelId, Dim, Quantity};

    fn sealed_design() -> SealedDesign {
        seal(Design {
            channel: ChannelId::VPhonon,
            epsilon: 0.1,
            confidence: 0.95,
            committed_at: "t0".to_string(),
            c: Quantity::pure(1.0),
            rho_a: Quantity::pure(1.0),
            rho_b: Quantity::pure(2.0),
            g_a: Quantity::pure(3.0),
            g_b: Quantity::pure(4.0),
        })
        .unwrap()
    }

    fn exact_measurements(sealed: &SealedDesign) -> Measurements {
        Measurements {
            aa: sealed.predictions.aa,
            ab: sealed.predictions.ab,
            ba: sealed.predictions.ba,
            bb: sealed.predictions.bb,
        }
    }

    #[test]
    fn exact_data_is_supported() {
        let sealed = sealed_design();
        let meas = exact_measurements(&sealed);
        let eval = evaluate(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        assert_eq!(eval.status, VerdictStatus::Supported);
        assert_eq!(eval.tests.len(), 4);
    }

    #[test]
    fn column_perturbation_gives_falsified_column() {
        let sealed = sealed_design();
        let mut meas = exact_measurements(&sealed);
        meas.ab = meas.ab.scale(1.2);
        meas.bb = meas.bb.scale(1.2);
        let eval = evaluate(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        assert_eq!(
            eval.status,
            VerdictStatus::Falsified(FalsifiedAxis::Column)
        );
    }

    #[test]
    fn row_perturbation_gives_falsified_row() {
        let sealed = sealed_design();
        let mut meas = exact_measurements(&sealed);
        // A pure material effect: row b reads 1.3x the factorized value in
        // both columns; column ratios are untouched.
        meas.ba = meas.ba.scale(1.3);
        meas.bb = meas.bb.scale(1.3);
        let eval = evaluate(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        assert_eq!(eval.status, VerdictStatus::Falsified(FalsifiedAxis::Row));
    }

    #[test]
    fn single_cell_perturbation_falsifies_both_axes() {
        let sealed = sealed_design();
        let mut meas = exact_measurements(&sealed);
        meas.bb = meas.bb.scale(1.5);
        let eval = evaluate(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        assert_eq!(eval.status, VerdictStatus::Falsified(FalsifiedAxis::Both));
    }

    #[test]
    fn huge_sigmas_give_indeterminate() {
        let sealed = sealed_design();
        let dim = Dim::NONE;
        // 50% relative sigmas everywhere: sigma_residual ~ 1, far beyond
        // epsilon / z(0.95) ~ 0.05.
        let meas = Measurements {
            aa: Quantity::new(3.0, 1.5, dim).unwrap(),
            ab: Quantity::new(4.0, 2.0, dim).unwrap(),
            ba: Quantity::new(6.0, 3.0, dim).unwrap(),
            bb: Quantity::new(8.0, 4.0, dim).unwrap(),
        };
        let eval = evaluate(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        assert_eq!(eval.status, VerdictStatus::Indeterminate);
    }

    #[test]
    fn indeterminate_beats_falsified_when_underpowered() {
        // A large discrepancy measured with even larger uncertainty: the
        // point estimate fails the magnitude gate, but the design cannot
        // decide at 95% confidence, so the verdict is Indeterminate.
        let sealed = sealed_design();
        let dim = Dim::NONE;
        let meas = Measurements {
            aa: Quantity::new(3.0, 1.5, dim).unwrap(),
            ab: Quantity::new(4.0, 2.0, dim).unwrap(),
            ba: Quantity::new(9.0, 4.5, dim).unwrap(), // 1.5x the prediction
            bb: Quantity::new(8.0, 4.0, dim).unwrap(),
        };
        let eval = evaluate(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        assert!(eval
            .tests
            .iter()
            .any(|t| !t.magnitude_pass && t.low_power));
        assert_eq!(eval.status, VerdictStatus::Indeterminate);
    }

    #[test]
    fn display_forms() {
        assert_eq!(VerdictStatus::Supported.to_string(), "Supported");
        assert_eq!(
            VerdictStatus::Falsified(FalsifiedAxis::Column).to_string(),
            "Falsified(column)"
        );
        assert_eq!(VerdictStatus::Indeterminate.to_string(), "Indeterminate");
    }
}
