//! Grading a minimum dataset against trend-level or quantitative reporting
//! bars.
//!
//! Validation is graded rather than binary. Structural soundness — known
//! statistics with the right dimensions, couplings dimensioned to match
//! the closure registry — gates trend-level claims. Full uncertainty and
//! provenance reporting (statistical bounds everywhere, acquisition
//! method and witness provenance on state variables, solver detail on
//! couplings, confirmed parity stability on quasiparticle observables)
//! gates quantitative claims. Observable dimensions are deliberately not
//! checked: device-level observables legitimately range over inverse
//! quality factors, times, and noise powers.

use std::collections::BTreeMap;

use super::document::MdsDocument;
use super::parse::parse_mds;
use crate::units::{closure_spec, ChannelId, Dim};

/// Requested reporting bar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    /// Enough to support directional (trend) claims.
    Trend,
    /// Enough to support quantitative comparison against budget limits.
    Quantitative,
}

impl Strictness {
    fn bar(&self) -> Grade {
        match self {
            Strictness::Trend => Grade::Trend,
            Strictness::Quantitative => Grade::Quantitative,
        }
    }
}

/// Reporting grade actually achieved. Ordered: `Insufficient < Trend <
/// Quantitative`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Grade {
    Insufficient,
    Trend,
    Quantitative,
}

impl Grade {
    pub fn label(&self) -> &'static str {
        match self {
            Grade::Insufficient => "insufficient",
            Grade::Trend => "trend",
            Grade::Quantitative => "quantitative",
        }
    }
}

/// Registry of recognized state-variable statistics and their dimensions.
#[derive(Debug, Clone)]
pub struct StatisticRegistry {
    entries: BTreeMap<(ChannelId, String), Dim>,
}

impl StatisticRegistry {
    /// The statistics native to the six channels: defect areal moment
    /// (I), spin areal density (II), seam resistance-length product
    /// (III), quasiparticle volume density (IVa and IVb), and phonon
    /// impedance mismatch (V).
    pub fn standard() -> StatisticRegistry {
        let mut registry = StatisticRegistry { entries: BTreeMap::new() };
        let per_area = Dim::LENGTH.powi(-2);
        let per_volume = Dim::LENGTH.powi(-3);
        let ohm_metre = closure_spec(ChannelId::IiiSeam).rho.dim;
        registry.register(ChannelId::ITls, "mu2", per_area);
        registry.register(ChannelId::IiSpin, "rho_spin", per_area);
        registry.register(ChannelId::IiiSeam, "r_seam", ohm_metre);
        registry.register(ChannelId::IvaQpTrap, "n_qp", per_volume);
        registry.register(ChannelId::IvbQpEnv, "n_qp", per_volume);
        registry.register(ChannelId::VPhonon, "z_ph", Dim::NONE);
        registry
    }

    /// Adds (or overrides) a recognized statistic.
    pub fn register(&mut self, channel: ChannelId, name: &str, dim: Dim) {
        self.entries.insert((channel, name.to_string()), dim);
    }

    pub fn dim_of(&self, channel: ChannelId, name: &str) -> Option<Dim> {
        self.entries.get(&(channel, name.to_string())).copied()
    }
}

impl Default for StatisticRegistry {
    fn default() -> Self {
        StatisticRegistry::standard()
    }
}

/// One shortcoming found during validation. `blocks` is the lowest grade
/// the shortcoming makes unattainable: a deficiency blocking `Trend`
/// leaves the channel `Insufficient`; one blocking `Quantitative` caps it
/// at `Trend`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deficiency {
    pub channel: Option<ChannelId>,
    pub line: usize,
    pub blocks: Grade,
    pub message: String,
}

/// Outcome of grading a dataset.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub requested: Strictness,
    /// Overall grade: the worst channel grade.
    pub grade: Grade,
    pub channel_grades: BTreeMap<ChannelId, Grade>,
    pub deficiencies: Vec<Deficiency>,
    pub meets_requested: bool,
}

struct Grader {
    deficiencies: Vec<Deficiency>,
}

impl Grader {
    fn flag(
        &mut self,
        channel: ChannelId,
        line: usize,
        blocks: Grade,
        message: impl Into<String>,
    ) {
        self.deficiencies.push(Deficiency {
            channel: Some(channel),
            line,
            blocks,
            message: message.into(),
        });
    }
}

/// Grades a document with the standard statistic registry.
pub fn validate(doc: &MdsDocument, requested: Strictness) -> ValidationReport {
    validate_with_registry(doc, requested, &StatisticRegistry::standard())
}

/// Grades a document against a caller-supplied statistic registry.
pub fn validate_with_registry(
    doc: &MdsDocument,
    requested: Strictness,
    registry: &StatisticRegistry,
) -> ValidationReport {
    let mut grader = Grader { deficiencies: Vec::new() };

    for r in &doc.state_variables {
        match registry.dim_of(r.channel, &r.statistic) {
            None => grader.flag(
                r.channel,
                r.line,
                Grade::Trend,
                format!(
                    "state variable `{}` is not a recognized statistic for channel {}",
                    r.statistic,
                    r.channel.label()
                ),
            ),
            Some(expected) if r.quantity.dim() != expected => grader.flag(
                r.channel,
                r.line,
                Grade::Trend,
                format!(
                    "state variable `{}` has dimension {} but {} is required",
                    r.statistic,
                    r.quantity.dim(),
                    expected
                ),
            ),
            Some(_) => {}
        }
        if !r.raw.has_sigma() {
            grader.flag(
                r.channel,
                r.line,
                Grade::Quantitative,
                format!("state variable `{}` has no statistical bound", r.statistic),
            );
        }
        if r.method.is_none() {
            grader.flag(
                r.channel,
                r.line,
                Grade::Quantitative,
                format!("state variable `{}` does not state its measurement method", r.statistic),
            );
        }
        if r.witness.is_none() {
            grader.flag(
                r.channel,
                r.line,
                Grade::Quantitative,
                format!(
                    "state variable `{}` does not state witness-sample provenance",
                    r.statistic
                ),
            );
        }
    }

    for r in &doc.couplings {
        let expected = closure_spec(r.channel).g.dim;
        if r.quantity.dim() != expected {
            grader.flag(
                r.channel,
                r.line,
                Grade::Trend,
                format!(
                    "coupling `{}` has dimension {} but channel {} requires {}",
                    r.name,
                    r.quantity.dim(),
                    r.channel.label(),
                    expected
                ),
            );
        }
        if !r.raw.has_sigma() {
            grader.flag(
                r.channel,
                r.line,
                Grade::Quantitative,
                format!("coupling `{}` has no statistical bound", r.name),
            );
        }
        for (field, value) in [
            ("mode_volume", &r.mode_volume),
            ("boundary", &r.boundary),
            ("solver", &r.solver),
        ] {
            if value.is_none() {
                grader.flag(
                    r.channel,
                    r.line,
                    Grade::Quantitative,
                    format!("coupling `{}` does not state its {field}", r.name),
                );
            }
        }
    }

    for r in &doc.observables {
        if !r.raw.has_sigma() {
            grader.flag(
                r.channel,
                r.line,
                Grade::Quantitative,
                format!("observable `{}` has no statistical bound", r.observable),
            );
        }
        // Quasiparticle observables are only quantitatively meaningful
        // when charge-parity stability was confirmed during acquisition.
        if matches!(r.channel, ChannelId::IvaQpTrap | ChannelId::IvbQpEnv)
            && r.parity.as_deref() != Some("confirmed")
        {
            grader.flag(
                r.channel,
                r.line,
                Grade::Quantitative,
                format!(
                    "quasiparticle observable `{}` lacks `parity=confirmed`",
                    r.observable
                ),
            );
        }
    }

    report_from(doc.channels(), requested, grader.deficiencies)
}

/// Parses and grades text in one step. Text that fails to parse grades as
/// `Insufficient`, with the parse issues reported as deficiencies.
pub fn validate_text(text: &str, requested: Strictness) -> ValidationReport {
    let outcome = parse_mds(text);
    match outcome.document {
        Some(doc) => validate(&doc, requested),
        None => {
            let deficiencies = outcome
                .issues
                .into_iter()
                .map(|issue| Deficiency {
                    channel: None,
                    line: issue.line,
                    blocks: Grade::Trend,
                    message: issue.message,
                })
                .collect();
            report_from(Vec::new(), requested, deficiencies)
        }
    }
}

fn report_from(
    channels: Vec<ChannelId>,
    requested: Strictness,
    deficiencies: Vec<Deficiency>,
) -> ValidationReport {
    let mut channel_grades = BTreeMap::new();
    for channel in channels {
        let mut grade = Grade::Quantitative;
        for d in deficiencies.iter().filter(|d| d.channel == Some(channel)) {
            let capped = match d.blocks {
                Grade::Insufficient | Grade::Trend => Grade::Insufficient,
                Grade::Quantitative => Grade::Trend,
            };
            grade = grade.min(capped);
        }
        channel_grades.insert(channel, grade);
    }
    let grade = channel_grades
        .values()
        .copied()
        .min()
        .unwrap_or(Grade::Insufficient);
    ValidationReport {
        requested,
        grade,
        channel_grades,
        deficiencies,
        meets_requested: grade >= requested.bar(),
    }
}
