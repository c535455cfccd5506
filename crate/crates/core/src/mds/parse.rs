//! Total parser for minimum-dataset text.
//!
//! Grammar (line oriented, UTF-8, `#` comments):
//!
//! ```text
//! [rho]                            # materials state variables
//! I.mu2 = 2.6 0.12 1/um^2 | method=FIB-SEM | witness=lot 7 wafer twin
//!
//! [g]                              # geometry coupling functionals
//! I.g_edge = 2e-4 1e-6 m^2 | mode_volume=... | boundary=... | solver=...
//!
//! [o]                              # coherence observables
//! I.q_inv = 4e-7 2e-8 1 | context=t1-window
//! ```
//!
//! A record value is `<value> [sigma] <unit>`: with three or more tokens
//! the second is the statistical bound when it parses as a number, and the
//! unit is everything after it; with two tokens the bound is absent and
//! the second token is the unit (so `5 1` is value 5 in unit `1`).
//! Metadata follows in `key=value` segments separated by `|`.
//!
//! Parsing is total: every problem in the input is reported as a located
//! issue (line and column), and the structured document is produced only
//! when the input is issue-free.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::document::{
    CouplingRecord, MdsDocument, ObservableRecord, ProtocolContext, RawValue,
    StateVariableRecord,
};
use crate::units::{parse_unit, ChannelId};

/// A located problem in minimum-dataset text. Lines and columns are
/// 1-based; column 1 is used for whole-line and whole-document issues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

/// Outcome of parsing: the document when the text is clean, otherwise the
/// full list of located issues.
#[derive(Debug, Clone)]
pub struct MdsParseOutcome {
    pub document: Option<MdsDocument>,
    pub issues: Vec<Issue>,
}

impl MdsParseOutcome {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SectionKind {
    Rho,
    G,
    O,
}

impl SectionKind {
    fn parse(name: &str) -> Option<SectionKind> {
        match name {
            "rho" => Some(SectionKind::Rho),
            "g" => Some(SectionKind::G),
            "o" => Some(SectionKind::O),
            _ => None,
        }
    }

    fn category(&self) -> &'static str {
        match self {
            SectionKind::Rho => "Microstructural State Variables",
            SectionKind::G => "Geometry Coupling Functionals",
            SectionKind::O => "Coherence Observables",
        }
    }
}

/// Strips a trailing comment; `#` starts a comment anywhere on the line,
/// so free-text metadata values may not contain `#`.
fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

/// Column (1-based) of `needle`'s first occurrence at or after `from`.
fn column_of(line: &str, needle: &str, from: usize) -> usize {
    line[from..].find(needle).map(|i| from + i + 1).unwrap_or(1)
}

struct Parser {
    issues: Vec<Issue>,
    doc: MdsDocument,
    seen_keys: BTreeSet<(&'static str, ChannelId, String)>,
    seen_sections: Vec<SectionKind>,
}

impl Parser {
    fn issue(&mut self, line: usize, column: usize, message: impl Into<String>) {
        self.issues.push(Issue { line, column, message: message.into() });
    }

    /// Splits `<channel>.<name>` and resolves the channel prefix.
    fn parse_key(
        &mut self,
        key: &str,
        line_no: usize,
        column: usize,
    ) -> Option<(ChannelId, String)> {
        let Some((channel_part, name)) = key.split_once('.') else {
            self.issue(
                line_no,
                column,
                format!("record key `{key}` must be `<channel>.<name>`"),
            );
            return None;
        };
        if name.trim().is_empty() {
            self.issue(line_no, column, format!("record key `{key}` has an empty name"));
            return None;
        }
        match ChannelId::parse(channel_part) {
            Ok(channel) => Some((channel, name.trim().to_string())),
            Err(e) => {
                self.issue(line_no, column, e.to_string());
                None
            }
        }
    }

    /// Parses the `<value> [sigma] <unit>` part of a record.
    fn parse_value(&mut self, raw: &str, line_no: usize, column: usize) -> Option<RawValue> {
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.is_empty() {
            self.issue(line_no, column, "record has no value");
            return None;
        }
        let Ok(value) = tokens[0].parse::<f64>() else {
            self.issue(line_no, column, format!("cannot parse value `{}`", tokens[0]));
            return None;
        };
        if !value.is_finite() {
            self.issue(line_no, column, format!("value `{}` is not finite", tokens[0]));
            return None;
        }
        let (sigma, unit_tokens) = match tokens.len() {
            1 => {
                self.issue(
                    line_no,
                    column,
                    "record is missing units (expected `<value> [sigma] <unit>`)",
                );
                return None;
            }
            2 => (None, &tokens[1..]),
            _ => match tokens[1].parse::<f64>() {
                Ok(s) => (Some(s), &tokens[2..]),
                Err(_) => (None, &tokens[1..]),
            },
        };
        if let Some(s) = sigma {
            if !s.is_finite() || s < 0.0 {
                self.issue(
                    line_no,
                    column,
                    format!("statistical bound must be finite and non-negative, got `{s}`"),
                );
                return None;
            }
        }
        let unit = unit_tokens.join(" ");
        if let Err(e) = parse_unit(&unit) {
            self.issue(
                line_no,
                column_of_unit(raw, &unit).map(|c| column + c - 1).unwrap_or(column),
                format!("bad unit `{unit}`: {e}"),
            );
            return None;
        }
        Some(RawValue { value, sigma, unit })
    }

    /// Parses `key=value` metadata segments.
    fn parse_metadata(
        &mut self,
        segments: &[&str],
        line_no: usize,
        line: &str,
    ) -> Option<BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        let mut ok = true;
        for segment in segments {
            let column = column_of(line, segment.trim(), 0);
            let Some((key, value)) = segment.split_once('=') else {
                self.issue(
                    line_no,
                    column,
                    format!("metadata segment `{}` must be `key=value`", segment.trim()),
                );
                ok = false;
                continue;
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                self.issue(
                    line_no,
                    column,
                    format!("metadata segment `{}` has an empty key or value", segment.trim()),
                );
                ok = false;
                continue;
            }
            if out.insert(key.to_string(), value.to_string()).is_some() {
                self.issue(line_no, column, format!("duplicate metadata key `{key}`"));
                ok = false;
            }
        }
        ok.then_some(out)
    }

    fn record(&mut self, section: SectionKind, line: &str, line_no: usize) {
        let Some((key_part, rest)) = line.split_once('=') else {
            self.issue(line_no, 1, format!("expected `key = value`, got `{}`", line.trim()));
            return;
        };
        let key = key_part.trim();
        let key_column = column_of(line, key, 0);
        let Some((channel, name)) = self.parse_key(key, line_no, key_column) else {
            return;
        };
        let section_name = match section {
            SectionKind::Rho => "rho",
            SectionKind::G => "g",
            SectionKind::O => "o",
        };
        if !self.seen_keys.insert((section_name, channel, name.clone())) {
            self.issue(
                line_no,
                key_column,
                format!("duplicate record key `{key}` in section [{section_name}]"),
            );
            return;
        }
        let mut segments = rest.split('|');
        let value_part = segments.next().unwrap_or("");
        let value_column = column_of(line, value_part.trim(), key_part.len() + 1);
        let meta_segments: Vec<&str> = segments.collect();
        let raw = self.parse_value(value_part, line_no, value_column);
        let metadata = self.parse_metadata(&meta_segments, line_no, line);
        let (Some(raw), Some(mut metadata)) = (raw, metadata) else {
            return;
        };
        let quantity = match raw.quantity() {
            Ok(q) => q,
            Err(e) => {
                self.issue(line_no, value_column, e.to_string());
                return;
            }
        };
        match section {
            SectionKind::Rho => {
                let record = StateVariableRecord {
                    channel,
                    statistic: name,
                    raw,
                    quantity,
                    method: metadata.remove("method"),
                    witness: metadata.remove("witness"),
                    extra: metadata,
                    line: line_no,
                };
                self.doc.state_variables.push(record);
            }
            SectionKind::G => {
                let record = CouplingRecord {
                    channel,
                    name,
                    raw,
                    quantity,
                    mode_volume: metadata.remove("mode_volume"),
                    boundary: metadata.remove("boundary"),
                    solver: metadata.remove("solver"),
                    extra: metadata,
                    line: line_no,
                };
                self.doc.couplings.push(record);
            }
            SectionKind::O => {
                let context_text = metadata.remove("context");
                let convention = metadata.remove("convention");
                let parity = metadata.remove("parity");
                let Some(context_text) = context_text else {
                    self.issue(
                        line_no,
                        key_column,
                        "observable records must carry protocol context \
                         (`context=<ramsey|echo|t1-window|parity-monitor>`)",
                    );
                    return;
                };
                let Some(context) = ProtocolContext::parse(&context_text) else {
                    self.issue(
                        line_no,
                        column_of(line, &context_text, 0),
                        format!(
                            "unknown protocol context `{context_text}` \
                             (expected ramsey, echo, t1-window, or parity-monitor)"
                        ),
                    );
                    return;
                };
                // Dephasing-time observables are only interpretable knowing
                // whether they were acquired via Ramsey or echo.
                let normalized: String = name
                    .to_ascii_lowercase()
                    .chars()
                    .filter(|c| c.is_ascii_alphanumeric())
                    .collect();
                if normalized.contains("tphi")
                    && !matches!(context, ProtocolContext::Ramsey | ProtocolContext::Echo)
                {
                    self.issue(
                        line_no,
                        key_column,
                        format!(
                            "dephasing-time observable `{name}` must state its protocol \
                             context as ramsey or echo, got `{}`",
                            context.label()
                        ),
                    );
                    return;
                }
                // Flux-noise reporting is ambiguous without the spectral
                // convention of the quoted noise power.
                if channel == ChannelId::IiSpin && convention.is_none() {
                    self.issue(
                        line_no,
                        key_column,
                        format!(
                            "flux-noise observable `{name}` must carry a spectral \
                             convention tag (`convention=one-sided` or `two-sided`)"
                        ),
                    );
                    return;
                }
                let record = ObservableRecord {
                    channel,
                    observable: name,
                    raw,
                    quantity,
                    context,
                    convention,
                    parity,
                    extra: metadata,
                    line: line_no,
                };
                self.doc.observables.push(record);
            }
        }
    }
}

fn column_of_unit(value_part: &str, unit: &str) -> Option<usize> {
    value_part.find(unit).map(|i| i + 1)
}

/// Parses minimum-dataset text, collecting every issue instead of stopping
/// at the first.
pub fn parse_mds(text: &str) -> MdsParseOutcome {
    let mut parser = Parser {
        issues: Vec::new(),
        doc: MdsDocument::default(),
        seen_keys: BTreeSet::new(),
        seen_sections: Vec::new(),
    };
    let mut current: Option<SectionKind> = None;
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw_line);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            match SectionKind::parse(name.trim()) {
                Some(kind) => {
                    if parser.seen_sections.contains(&kind) {
                        parser.issue(
                            line_no,
                            column_of(raw_line, "[", 0),
                            format!("duplicate section [{}]", name.trim()),
                        );
                    } else {
                        parser.seen_sections.push(kind);
                    }
                    current = Some(kind);
                }
                None => {
                    parser.issue(
                        line_no,
                        column_of(raw_line, "[", 0),
                        format!(
                            "unknown section [{}] (expected [rho], [g], or [o])",
                            name.trim()
                        ),
                    );
                    current = None;
                }
            }
            continue;
        }
        let Some(section) = current else {
            parser.issue(line_no, 1, format!("record `{trimmed}` appears before any section"));
            continue;
        };
        parser.record(section, line, line_no);
    }
    // The three reporting categories must all be present and non-empty.
    let last_line = text.lines().count().max(1);
    for kind in [SectionKind::Rho, SectionKind::G, SectionKind::O] {
        let present = parser.seen_sections.contains(&kind);
        let populated = match kind {
            SectionKind::Rho => !parser.doc.state_variables.is_empty(),
            SectionKind::G => !parser.doc.couplings.is_empty(),
            SectionKind::O => !parser.doc.observables.is_empty(),
        };
        if !present {
            parser.issue(last_line, 1, format!("{} absent (missing section)", kind.category()));
        } else if !populated && parser.issues.is_empty() {
            // Only flag emptiness when no record-level issue explains it.
            parser.issue(last_line, 1, format!("{} absent (section empty)", kind.category()));
        }
    }
    let document = parser.issues.is_empty().then_some(parser.doc);
    MdsParseOutcome { document, issues: parser.issues }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[rho]
I.mu2 = 2.6 0.12 1/um^2 | method=FIB-SEM | witness=lot 7 wafer twin

[g]
I.g_edge = 2e-4 1e-6 m^2 | mode_volume=half-space | boundary=PEC | solver=FEM order 2

[o]
I.q_inv = 4e-7 2e-8 1 | context=t1-window
";

    #[test]
    fn minimal_document_parses_cleanly() {
        let outcome = parse_mds(MINIMAL);
        assert!(outcome.is_clean(), "issues: {:?}", outcome.issues);
        let doc = outcome.document.unwrap();
        assert_eq!(doc.state_variables.len(), 1);
        assert_eq!(doc.couplings.len(), 1);
        assert_eq!(doc.observables.len(), 1);
        let rho = &doc.state_variables[0];
        assert_eq!(rho.channel, ChannelId::ITls);
        assert_eq!(rho.statistic, "mu2");
        assert_eq!(rho.method.as_deref(), Some("FIB-SEM"));
        assert_eq!(rho.witness.as_deref(), Some("lot 7 wafer twin"));
        approx::assert_relative_eq!(rho.quantity.value(), 2.6e12, max_relative = 1e-12);
        let o = &doc.observables[0];
        assert_eq!(o.context, ProtocolContext::T1Window);
    }

    #[test]
    fn two_token_values_have_no_bound_and_bare_one_is_a_unit() {
        let text = "\
[rho]
V.z_ph = 5 1

[g]
V.g_ph = 0.3 1

[o]
V.q_inv = 1e-7 1 | context=t1-window
";
        let outcome = parse_mds(text);
        assert!(outcome.is_clean(), "issues: {:?}", outcome.issues);
        let doc = outcome.document.unwrap();
        let rho = &doc.state_variables[0];
        assert_eq!(rho.raw.value, 5.0);
        assert_eq!(rho.raw.sigma, None);
        assert_eq!(rho.raw.unit, "1");
        assert!(!rho.raw.has_sigma());
    }

    #[test]
    fn multi_token_units_survive_without_a_bound() {
        let text = "\
[rho]
III.r_seam = 3.2e-6 ohm m | method=CPW

[g]
III.y_seam = 0.8 1e-2 S/m

[o]
III.q_inv = 2e-7 1e-8 1 | context=t1-window
";
        let outcome = parse_mds(text);
        assert!(outcome.is_clean(), "issues: {:?}", outcome.issues);
        let doc = outcome.document.unwrap();
        let seam = &doc.state_variables[0];
        assert_eq!(seam.raw.unit, "ohm m");
        assert_eq!(seam.raw.sigma, None);
        let y = &doc.couplings[0];
        assert_eq!(y.raw.sigma, Some(1e-2));
        assert_eq!(y.raw.unit, "S/m");
    }

    #[test]
    fn missing_sections_are_reported_by_category_name() {
        let text = "\
[rho]
I.mu2 = 2.6 0.12 1/um^2

[o]
I.q_inv = 4e-7 2e-8 1 | context=t1-window
";
        let outcome = parse_mds(text);
        assert!(outcome.document.is_none());
        assert_eq!(outcome.issues.len(), 1);
        assert!(outcome.issues[0]
            .message
            .contains("Geometry Coupling Functionals absent"));
    }

    #[test]
    fn dephasing_record_without_ramsey_or_echo_context_is_rejected() {
        let text = MINIMAL.replace(
            "I.q_inv = 4e-7 2e-8 1 | context=t1-window",
            "I.tphi = 80e-6 5e-6 s | context=t1-window",
        );
        let outcome = parse_mds(&text);
        assert!(outcome.document.is_none());
        assert!(outcome.issues.iter().any(|i| {
            i.message.contains("ramsey or echo") && i.line == 8
        }));
        // With an echo context the same record is fine.
        let ok = MINIMAL.replace(
            "I.q_inv = 4e-7 2e-8 1 | context=t1-window",
            "I.tphi = 80e-6 5e-6 s | context=echo",
        );
        assert!(parse_mds(&ok).is_clean());
    }

    #[test]
    fn flux_noise_records_need_a_spectral_convention() {
        let text = "\
[rho]
II.rho_spin = 4e17 2e16 1/m^2 | method=EPR

[g]
II.g_phi = 1.1e-12 1e-13 T^2 A^-2 m^2

[o]
II.flux_noise = 2e-12 1e-13 Wb^2 | context=echo
";
        let outcome = parse_mds(text);
        assert!(outcome.document.is_none());
        assert!(outcome
            .issues
            .iter()
            .any(|i| i.message.contains("spectral convention")));
        let fixed = text.replace(
            "| context=echo",
            "| context=echo | convention=one-sided",
        );
        assert!(parse_mds(&fixed).is_clean());
    }

    #[test]
    fn every_issue_carries_a_location_and_parsing_is_total() {
        let text = "\
stray = 1 0 1
[rho]
I.mu2 = abc 0.1 1/um^2
IV.n_qp = 1e6 1e4 1/m^3
I.mu2.bad

[g]
I.g_edge = 2e-4 1e-6 bogus_unit

[o]
I.q_inv = 4e-7 2e-8 1
";
        let outcome = parse_mds(text);
        assert!(outcome.document.is_none());
        // One issue per problem: stray record, bad value, ambiguous IV,
        // malformed record, unknown unit, missing context.
        assert_eq!(outcome.issues.len(), 6, "issues: {:#?}", outcome.issues);
        for issue in &outcome.issues {
            assert!(issue.line >= 1);
            assert!(issue.column >= 1);
        }
        assert!(outcome.issues.iter().any(|i| i.message.contains("IVa-QPTrap")));
        assert!(outcome.issues.iter().any(|i| i.message.contains("bogus_unit")));
    }

    #[test]
    fn duplicate_keys_and_sections_are_flagged() {
        let text = "\
[rho]
I.mu2 = 2.6 0.12 1/um^2
I-TLS.mu2 = 2.7 0.12 1/um^2

[rho]
II.rho_spin = 4e17 2e16 1/m^2

[g]
I.g_edge = 2e-4 1e-6 m^2

[o]
I.q_inv = 4e-7 2e-8 1 | context=t1-window
";
        let outcome = parse_mds(text);
        assert!(outcome.issues.iter().any(|i| i.message.contains("duplicate record key")));
        assert!(outcome.issues.iter().any(|i| i.message.contains("duplicate section")));
    }

    #[test]
    fn negative_bound_and_missing_unit_are_rejected() {
        let bad_sigma = MINIMAL.replace("2.6 0.12 1/um^2", "2.6 -0.1 1/um^2");
        assert!(parse_mds(&bad_sigma)
            .issues
            .iter()
            .any(|i| i.message.contains("non-negative")));
        let no_unit = MINIMAL.replace("2.6 0.12 1/um^2", "2.6");
        assert!(parse_mds(&no_unit)
            .issues
            .iter()
            .any(|i| i.message.contains("missing units")));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# header comment\n\n{MINIMAL}\n# trailing\n");
        assert!(parse_mds(&text).is_clean());
    }
}
