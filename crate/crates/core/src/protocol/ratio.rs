//! Row- and column-ratio tests with propagated residual uncertainty.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::design::{CellId, Measurements, SealedDesign};
use super::ProtocolError;
use crate::numerics::{sample_std, z_two_sided};
use crate::units::Quantity;

/// Which factorization axis a ratio test probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Material axis: within one geometry column, O_b/O_a must equal
    /// rho_b/rho_a.
    Row,
    /// Geometry axis: within one material row, O_B/O_A must equal G_B/G_A.
    Column,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::Row => "row",
            Axis::Column => "column",
        }
    }
}

/// How the residual sigma is obtained.
#[derive(Debug, Clone, Copy)]
pub enum SigmaMode {
    /// First-order (delta-method) propagation through the ratio of ratios.
    FirstOrder,
    /// Monte-Carlo cross-check: resample every input from independent
    /// normals and take the sample standard deviation of the residual.
    MonteCarlo { n_samples: usize, seed: u64 },
}

/// Residuals with |sigma = 0| are compared against this absolute floor when
/// forming the z-score: an exactly-propagated zero uncertainty with a
/// round-off-level residual counts as z = 0, anything larger as infinitely
/// significant.
pub const ZERO_SIGMA_RESIDUAL_FLOOR: f64 = 1e-12;

/// One evaluated ratio test.
#[derive(Debug, Clone)]
pub struct RatioTest {
    pub axis: Axis,
    /// Human-readable label, e.g. "row ratio in column A (bA/aA)".
    pub label: String,
    /// Numerator/denominator cells of the measured ratio.
    pub cells: (CellId, CellId),
    pub measured_ratio: f64,
    pub predicted_ratio: f64,
    /// measured/predicted - 1.
    pub residual: f64,
    pub sigma_residual: f64,
    pub z: f64,
    /// |residual| <= epsilon.
    pub magnitude_pass: bool,
    /// z <= z(confidence).
    pub significance_pass: bool,
    /// Both gates hold.
    pub pass: bool,
    /// The uncertainty is too wide to resolve the tolerance at the stated
    /// confidence: sigma_residual * z(confidence) > epsilon.
    pub low_power: bool,
}

fn ratio(num: &Quantity, den: &Quantity, context: &str) -> Result<Quantity, ProtocolError> {
    num.div(den).map_err(|e| {
        ProtocolError::InvalidMeasurements(format!("{context}: {e}"))
    })
}

/// The residual quantity (value = measured/predicted, sigma propagated) for
/// one test, first-order.
fn residual_quantity(
    meas_num: &Quantity,
    meas_den: &Quantity,
    pred_num: &Quantity,
    pred_den: &Quantity,
    context: &str,
) -> Result<Quantity, ProtocolError> {
    let measured = ratio(meas_num, meas_den, context)?;
    let predicted = ratio(pred_num, pred_den, context)?;
    ratio(&measured, &predicted, context)
}

struct TestSpec {
    axis: Axis,
    label: &'static str,
    /// (numerator, denominator) measurement cells.
    cells: (CellId, CellId),
    /// (numerator, denominator) of the predicted ratio; indexes into the
    /// design inputs rather than the predictions so the predicted ratio is
    /// exactly rho_b/rho_a or G_B/G_A.
    predicted: PredictedRatio,
}

#[derive(Clone, Copy)]
enum PredictedRatio {
    RhoBOverA,
    GBOverA,
}

const TEST_SPECS: [TestSpec; 4] = [
    TestSpec {
        axis: Axis::Row,
        label: "row ratio in column A (bA/aA vs rho_b/rho_a)",
        cells: (CellId::Ba, CellId::Aa),
        predicted: PredictedRatio::RhoBOverA,
    },
    TestSpec {
        axis: Axis::Row,
        label: "row ratio in column B (bB/aB vs rho_b/rho_a)",
        cells: (CellId::Bb, CellId::Ab),
        predicted: PredictedRatio::RhoBOverA,
    },
    TestSpec {
        axis: Axis::Column,
        label: "column ratio in row a (aB/aA vs G_B/G_A)",
        cells: (CellId::Ab, CellId::Aa),
        predicted: PredictedRatio::GBOverA,
    },
    TestSpec {
        axis: Axis::Column,
        label: "column ratio in row b (bB/bA vs G_B/G_A)",
        cells: (CellId::Bb, CellId::Ba),
        predicted: PredictedRatio::GBOverA,
    },
];

fn z_score(residual: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        residual.abs() / sigma
    } else if residual.abs() <= ZERO_SIGMA_RESIDUAL_FLOOR {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Evaluates the four ratio tests of a sealed design against measurements.
///
/// The seal is verified first; measurements against a tampered or unsealed
/// design are refused. Residuals follow the convention
/// `measured_ratio / predicted_ratio - 1` with the second treatment (row b,
/// column B) in the numerator.
pub fn evaluate_ratio_tests(
    sealed: &SealedDesign,
    measurements: &Measurements,
    mode: SigmaMode,
) -> Result<Vec<RatioTest>, ProtocolError> {
    sealed.verify()?;
    measurements.check_dims(&sealed.predictions)?;
    for cell in CellId::ALL {
        let m = measurements.get(cell);
        if m.value() <= 0.0 {
            return Err(ProtocolError::InvalidMeasurements(format!(
                "cell {}: measured observable must be positive, got {:e}",
                cell.label(),
                m.value()
            )));
        }
    }
    let design = &sealed.design;
    let epsilon = design.epsilon;
    let z_crit = z_two_sided(design.confidence);

    let mut tests = Vec::with_capacity(4);
    for spec in &TEST_SPECS {
        let (pred_num, pred_den) = match spec.predicted {
            PredictedRatio::RhoBOverA => (&design.rho_b, &design.rho_a),
            PredictedRatio::GBOverA => (&design.g_b, &design.g_a),
        };
        let meas_num = measurements.get(spec.cells.0);
        let meas_den = measurements.get(spec.cells.1);
        let q = residual_quantity(meas_num, meas_den, pred_num, pred_den, spec.label)?;
        let residual = q.value() - 1.0;
        let sigma_residual = match mode {
            SigmaMode::FirstOrder => q.sigma(),
            SigmaMode::MonteCarlo { n_samples, seed } => monte_carlo_sigma(
                meas_num, meas_den, pred_num, pred_den, n_samples, seed, spec.label,
            )?,
        };
        let z = z_score(residual, sigma_residual);
        let magnitude_pass = residual.abs() <= epsilon;
        let significance_pass = z <= z_crit;
        tests.push(RatioTest {
            axis: spec.axis,
            label: spec.label.to_string(),
            cells: spec.cells,
            measured_ratio: meas_num.value() / meas_den.value(),
            predicted_ratio: pred_num.value() / pred_den.value(),
            residual,
            sigma_residual,
            z,
            magnitude_pass,
            significance_pass,
            pass: magnitude_pass && significance_pass,
            low_power: sigma_residual * z_crit > epsilon,
        });
    }
    Ok(tests)
}

/// Monte-Carlo residual sigma: draws every input (two measurements, two
/// prediction factors) from independent normals centred on its value and
/// returns the sample standard deviation of `measured/predicted - 1`.
#[allow(clippy::too_many_arguments)]
fn monte_carlo_sigma(
    meas_num: &Quantity,
    meas_den: &Quantity,
    pred_num: &Quantity,
    pred_den: &Quantity,
    n_samples: usize,
    seed: u64,
    context: &str,
) -> Result<f64, ProtocolError> {
    if n_samples < 2 {
        return Err(ProtocolError::InvalidDesign(format!(
            "{context}: Monte-Carlo sigma needs at least 2 samples, got {n_samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |q: &Quantity, rng: &mut ChaCha8Rng| -> f64 {
        if q.sigma() == 0.0 {
            q.value()
        } else {
            let normal: Normal<f64> = Normal::new(q.value(), q.sigma()).expect("finite sigma");
            normal.sample(rng)
        }
    };
    let mut residuals = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let mn = draw(meas_num, &mut rng);
        let md = draw(meas_den, &mut rng);
        let pn = draw(pred_num, &mut rng);
        let pd = draw(pred_den, &mut rng);
        if md == 0.0 || pd == 0.0 || pn == 0.0 {
            // Degenerate draw (only possible for huge relative sigmas);
            // skip rather than divide by zero.
            continue;
        }
        residuals.push((mn / md) / (pn / pd) - 1.0);
    }
    if residuals.len() < 2 {
        return Err(ProtocolError::InvalidDesign(format!(
            "{context}: all Monte-Carlo draws were degenerate"
        )));
    }
    Ok(sample_std(&residuals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::design::{seal, Design};
    use crate::units::{ChannelId, Quantity};
    use approx::assert_relative_eq;
    use rand::Rng;

    fn design_with(rho: (f64, f64), g: (f64, f64)) -> SealedDesign {
        seal(Design {
            channel: ChannelId::VPhonon,
            epsilon: 0.1,
            confidence: 0.95,
            committed_at: "t0".to_string(),
            c: Quantity::pure(1.0),
            rho_a: Quantity::pure(rho.0),
            rho_b: Quantity::pure(rho.1),
            g_a: Quantity::pure(g.0),
            g_b: Quantity::pure(g.1),
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
    fn exact_factorized_data_passes_everywhere() {
        let sealed = design_with((1.0, 2.0), (3.0, 4.0));
        let meas = exact_measurements(&sealed);
        let tests = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        assert_eq!(tests.len(), 4);
        for t in &tests {
            assert!(t.residual.abs() <= 1e-12, "{}: {}", t.label, t.residual);
            assert!(t.pass, "{}", t.label);
            assert!(!t.low_power);
        }
    }

    #[test]
    fn single_cell_perturbation_hits_both_axes_through_bb() {
        // O_bB * 1.5 with the perturbed cell in the numerator: the column-B
        // row test and the row-b column test both read residual +0.5.
        let sealed = design_with((1.0, 2.0), (3.0, 4.0));
        let mut meas = exact_measurements(&sealed);
        meas.bb = meas.bb.scale(1.5);
        let tests = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        let by_label = |needle: &str| {
            tests
                .iter()
                .find(|t| t.label.contains(needle))
                .unwrap()
        };
        let row_b = by_label("row ratio in column B");
        assert_relative_eq!(row_b.residual, 0.5, max_relative = 1e-12);
        assert!(!row_b.pass);
        let col_b = by_label("column ratio in row b");
        assert_relative_eq!(col_b.residual, 0.5, max_relative = 1e-12);
        assert!(!col_b.pass);
        // The untouched tests stay clean.
        assert!(by_label("row ratio in column A").pass);
        assert!(by_label("column ratio in row a").pass);
    }

    #[test]
    fn whole_column_perturbation_is_attributed_to_the_column_axis() {
        // O_aB and O_bB both * 1.2: the factor cancels inside each row
        // test, so only the two column tests read residual +0.2.
        let sealed = design_with((1.0, 2.0), (3.0, 4.0));
        let mut meas = exact_measurements(&sealed);
        meas.ab = meas.ab.scale(1.2);
        meas.bb = meas.bb.scale(1.2);
        let tests = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        for t in &tests {
            match t.axis {
                Axis::Row => {
                    assert!(t.residual.abs() <= 1e-12, "{}: {}", t.label, t.residual);
                    assert!(t.pass);
                }
                Axis::Column => {
                    assert_relative_eq!(t.residual, 0.2, max_relative = 1e-12);
                    assert!(!t.pass);
                }
            }
        }
    }

    #[test]
    fn swapped_columns_invert_the_measured_ratio() {
        // With identical geometry couplings the predicted column ratio is
        // 1. If measurements arrive with the columns swapped, a true
        // measured ratio r becomes 1/r: the residual moves from r - 1 to
        // 1/r - 1.
        let sealed = design_with((1.0, 2.0), (3.0, 3.0));
        let mut meas = exact_measurements(&sealed);
        // Introduce a genuine column effect in the measurements: column B
        // reads 1.25x column A.
        let r = 1.25;
        meas.ab = meas.ab.scale(r);
        meas.bb = meas.bb.scale(r);
        let straight = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        let swapped_meas = Measurements {
            aa: meas.ab,
            ab: meas.aa,
            ba: meas.bb,
            bb: meas.ba,
        };
        let swapped = evaluate_ratio_tests(&sealed, &swapped_meas, SigmaMode::FirstOrder).unwrap();
        for (s, w) in straight.iter().zip(swapped.iter()) {
            if s.axis == Axis::Column {
                assert_relative_eq!(s.residual, r - 1.0, max_relative = 1e-12);
                assert_relative_eq!(w.residual, 1.0 / r - 1.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn zero_noise_random_designs_have_round_off_residuals() {
        // Property: for any positive rho, G, C, feeding the exact products
        // back as measurements leaves every residual at round-off level.
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        for _ in 0..50 {
            let mut draw = || 10f64.powf(rng.random_range(-6.0..6.0));
            let sealed = design_with((draw(), draw()), (draw(), draw()));
            let meas = exact_measurements(&sealed);
            let tests = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
            for t in &tests {
                assert!(
                    t.residual.abs() <= 1e-12,
                    "{}: residual {:e}",
                    t.label,
                    t.residual
                );
                assert!(t.pass);
            }
        }
    }

    #[test]
    fn rescaling_all_measurements_cancels() {
        let sealed = design_with((1.0, 2.0), (3.0, 4.0));
        let mut meas = exact_measurements(&sealed);
        meas.bb = meas.bb.scale(1.3);
        let base = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        let scaled_meas = Measurements {
            aa: meas.aa.scale(7.25),
            ab: meas.ab.scale(7.25),
            ba: meas.ba.scale(7.25),
            bb: meas.bb.scale(7.25),
        };
        let scaled = evaluate_ratio_tests(&sealed, &scaled_meas, SigmaMode::FirstOrder).unwrap();
        for (b, s) in base.iter().zip(scaled.iter()) {
            assert_relative_eq!(b.residual, s.residual, epsilon = 1e-14);
            assert_relative_eq!(b.sigma_residual, s.sigma_residual, epsilon = 1e-14);
        }
    }

    #[test]
    fn tampered_seal_refuses_evaluation() {
        let mut sealed = design_with((1.0, 2.0), (3.0, 4.0));
        let meas = exact_measurements(&sealed);
        sealed.design.rho_b = Quantity::pure(2.5);
        let err = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap_err();
        assert!(matches!(err, ProtocolError::SealViolation { .. }));
    }

    #[test]
    fn low_power_flag_reports_wide_intervals() {
        // Residual 0.05 with sigma_residual ~ 0.2 and epsilon 0.1: the
        // magnitude gate passes but the interval cannot resolve epsilon at
        // 95% confidence, so the test is flagged low-power.
        let sealed = design_with((1.0, 2.0), (3.0, 4.0));
        let mut meas = exact_measurements(&sealed);
        // Give the column-A cells a 20% relative sigma on the denominator
        // of one row test: sigma_residual ~ 0.2 for that test.
        meas.aa = Quantity::new(3.0, 0.6, meas.aa.dim()).unwrap();
        meas.ba = Quantity::new(6.0 * 1.05, 0.0, meas.ba.dim()).unwrap();
        let tests = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        let t = tests
            .iter()
            .find(|t| t.label.contains("row ratio in column A"))
            .unwrap();
        assert_relative_eq!(t.residual, 0.05, max_relative = 1e-12);
        assert!(t.sigma_residual > 0.15 && t.sigma_residual < 0.25);
        assert!(t.magnitude_pass);
        assert!(t.significance_pass);
        assert!(t.low_power);
    }

    #[test]
    fn first_order_sigma_matches_monte_carlo() {
        // For input relative sigmas up to 10% the delta method and a
        // Monte-Carlo resampling of the same inputs agree to 5%. (The
        // agreement degrades when several denominator inputs sit at the
        // full 10% simultaneously; see the corner-case test below.)
        let sealed = seal(Design {
            channel: ChannelId::VPhonon,
            epsilon: 0.1,
            confidence: 0.95,
            committed_at: "t0".to_string(),
            c: Quantity::pure(1.0),
            rho_a: Quantity::new(1.0, 0.05, crate::units::Dim::NONE).unwrap(),
            rho_b: Quantity::new(2.0, 0.1, crate::units::Dim::NONE).unwrap(),
            g_a: Quantity::pure(3.0),
            g_b: Quantity::pure(4.0),
        })
        .unwrap();
        let meas = Measurements {
            aa: Quantity::new(3.0, 0.3, crate::units::Dim::NONE).unwrap(),
            ab: Quantity::new(4.0, 0.2, crate::units::Dim::NONE).unwrap(),
            ba: Quantity::new(6.0, 0.4, crate::units::Dim::NONE).unwrap(),
            bb: Quantity::new(8.0, 0.5, crate::units::Dim::NONE).unwrap(),
        };
        let first = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        let mc = evaluate_ratio_tests(
            &sealed,
            &meas,
            SigmaMode::MonteCarlo {
                n_samples: 40_000,
                seed: 7,
            },
        )
        .unwrap();
        for (f, m) in first.iter().zip(mc.iter()) {
            assert_relative_eq!(
                f.sigma_residual,
                m.sigma_residual,
                max_relative = 5e-2
            );
        }
    }

    #[test]
    fn monte_carlo_inflation_at_the_all_ten_percent_corner() {
        // Documented limitation: a ratio of normals has a heavy right tail
        // from its denominators, so when several inputs carry the full 10%
        // relative sigma at once the Monte-Carlo sigma runs a few percent
        // above first order (measured ~4-6% with two 10% denominators in
        // one test). This test freezes that behaviour: the MC estimate is
        // systematically above first order but within 10%.
        let sealed = seal(Design {
            channel: ChannelId::VPhonon,
            epsilon: 0.1,
            confidence: 0.95,
            committed_at: "t0".to_string(),
            c: Quantity::pure(1.0),
            rho_a: Quantity::new(1.0, 0.1, crate::units::Dim::NONE).unwrap(),
            rho_b: Quantity::new(2.0, 0.2, crate::units::Dim::NONE).unwrap(),
            g_a: Quantity::pure(3.0),
            g_b: Quantity::pure(4.0),
        })
        .unwrap();
        let meas = Measurements {
            aa: Quantity::new(3.0, 0.3, crate::units::Dim::NONE).unwrap(),
            ab: Quantity::new(4.0, 0.4, crate::units::Dim::NONE).unwrap(),
            ba: Quantity::new(6.0, 0.6, crate::units::Dim::NONE).unwrap(),
            bb: Quantity::new(8.0, 0.8, crate::units::Dim::NONE).unwrap(),
        };
        let first = evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).unwrap();
        let mc = evaluate_ratio_tests(
            &sealed,
            &meas,
            SigmaMode::MonteCarlo {
                n_samples: 40_000,
                seed: 7,
            },
        )
        .unwrap();
        for (f, m) in first.iter().zip(mc.iter()) {
            let ratio = m.sigma_residual / f.sigma_residual;
            assert!(
                (1.0..1.10).contains(&ratio),
                "{}: mc/fo ratio {ratio}",
                f.label
            );
        }
    }

    #[test]
    fn zero_sigma_zero_residual_scores_zero() {
        assert_eq!(z_score(0.0, 0.0), 0.0);
        assert_eq!(z_score(5e-13, 0.0), 0.0);
        assert!(z_score(1e-6, 0.0).is_infinite());
        assert_relative_eq!(z_score(0.2, 0.1), 2.0);
    }

    #[test]
    fn nonpositive_measurement_is_refused() {
        let sealed = design_with((1.0, 2.0), (3.0, 4.0));
        let mut meas = exact_measurements(&sealed);
        meas.ab = Quantity::pure(0.0);
        assert!(evaluate_ratio_tests(&sealed, &meas, SigmaMode::FirstOrder).is_err());
    }
}
