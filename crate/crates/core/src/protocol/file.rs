//! Design-file and measurement-file I/O for the 2x2 protocol.
//!
//! A design file is sectioned text:
//!
//! ```text
//! [design]
//! channel = V-Phonon
//! epsilon = 0.1
//! confidence = 0.95
//! committed_at = 2026-08-23T00:00:00Z
//!
//! [c]
//! c = 1 0 1
//!
//! [rho]
//! a = 1 0 1
//! b = 2 0 1
//!
//! [g]
//! A = 3 0 1
//! B = 4 0 1
//! ```
//!
//! Record values are `<value> <sigma> <unit>`. Sealing (`protocol predict`)
//! appends `[predictions]` and `[seal]` sections; measurements live in a
//! separate CSV with header `cell,value,sigma,unit`.

use std::io::Read;

use super::design::{
    commitment_bytes, predict, CellId, Design, Measurements, Predictions, SealedDesign,
};
use super::ProtocolError;
use crate::textfmt::{parse_sections, Section};
use crate::units::{parse_unit, ChannelId, Quantity};
use sha2::{Digest, Sha256};

pub const MEASUREMENTS_HEADER: [&str; 4] = ["cell", "value", "sigma", "unit"];

/// A parsed design file: the design itself plus, if present, the sealed
/// predictions block.
#[derive(Debug, Clone)]
pub struct DesignDocument {
    pub design: Design,
    pub predictions: Option<Predictions>,
    pub seal: Option<String>,
}

fn parse_quantity_value(raw: &str, context: &str) -> Result<Quantity, ProtocolError> {
    let tokens: Vec<&str> = raw.split_whitespace().collect();
    if tokens.len() < 3 {
        return Err(ProtocolError::Parse(format!(
            "{context}: expected `<value> <sigma> <unit>`, got `{raw}`"
        )));
    }
    let value: f64 = tokens[0].parse().map_err(|_| {
        ProtocolError::Parse(format!("{context}: cannot parse value `{}`", tokens[0]))
    })?;
    let sigma: f64 = tokens[1].parse().map_err(|_| {
        ProtocolError::Parse(format!("{context}: cannot parse sigma `{}`", tokens[1]))
    })?;
    let unit_str = tokens[2..].join(" ");
    let unit = parse_unit(&unit_str)
        .map_err(|e| ProtocolError::Parse(format!("{context}: bad unit `{unit_str}`: {e}")))?;
    Quantity::new(value * unit.factor, sigma * unit.factor, unit.dim)
        .map_err(|e| ProtocolError::Parse(format!("{context}: {e}")))
}

fn require<'a>(section: &'a Section, key: &str, file_kind: &str) -> Result<&'a str, ProtocolError> {
    section
        .records
        .iter()
        .find(|r| r.key == key)
        .map(|r| r.value.as_str())
        .ok_or_else(|| {
            ProtocolError::Parse(format!(
                "{file_kind}: section [{}] is missing `{key}`",
                section.name
            ))
        })
}

fn find_section<'a>(
    parsed: &'a crate::textfmt::Parsed,
    name: &str,
) -> Result<&'a Section, ProtocolError> {
    parsed
        .section(name)
        .ok_or_else(|| ProtocolError::Parse(format!("design file: missing section [{name}]")))
}

/// Parses a design file (sealed or unsealed).
pub fn parse_design_text(text: &str) -> Result<DesignDocument, ProtocolError> {
    let parsed = parse_sections(text);
    if !parsed.is_clean() {
        let mut msgs: Vec<String> = parsed.errors.iter().map(|e| e.to_string()).collect();
        msgs.sort();
        return Err(ProtocolError::Parse(format!(
            "design file has {} syntax error(s): {}",
            parsed.errors.len(),
            msgs.join("; ")
        )));
    }
    let design_sec = find_section(&parsed, "design")?;
    let channel_name = require(design_sec, "channel", "design file")?;
    let channel = ChannelId::parse(channel_name)
        .map_err(|e| ProtocolError::Parse(format!("design file: {e}")))?;
    let epsilon: f64 = require(design_sec, "epsilon", "design file")?
        .parse()
        .map_err(|_| ProtocolError::Parse("design file: bad epsilon".to_string()))?;
    let confidence: f64 = require(design_sec, "confidence", "design file")?
        .parse()
        .map_err(|_| ProtocolError::Parse("design file: bad confidence".to_string()))?;
    let committed_at = require(design_sec, "committed_at", "design file")?.to_string();

    let c_sec = find_section(&parsed, "c")?;
    let c = parse_quantity_value(require(c_sec, "c", "design file")?, "[c] c")?;

    let rho_sec = find_section(&parsed, "rho")?;
    let rho_a = parse_quantity_value(require(rho_sec, "a", "design file")?, "[rho] a")?;
    let rho_b = parse_quantity_value(require(rho_sec, "b", "design file")?, "[rho] b")?;

    let g_sec = find_section(&parsed, "g")?;
    let g_a = parse_quantity_value(require(g_sec, "A", "design file")?, "[g] A")?;
    let g_b = parse_quantity_value(require(g_sec, "B", "design file")?, "[g] B")?;

    let design = Design {
        channel,
        epsilon,
        confidence,
        committed_at,
        c,
        rho_a,
        rho_b,
        g_a,
        g_b,
    };

    let predictions = match parsed.section("predictions") {
        None => None,
        Some(sec) => {
            let cell = |label: &str| -> Result<Quantity, ProtocolError> {
                parse_quantity_value(
                    require(sec, label, "design file")?,
                    &format!("[predictions] {label}"),
                )
            };
            Some(Predictions {
                aa: cell("aA")?,
                ab: cell("aB")?,
                ba: cell("bA")?,
                bb: cell("bB")?,
            })
        }
    };

    let seal = match parsed.section("seal") {
        None => None,
        Some(sec) => {
            let algorithm = require(sec, "algorithm", "design file")?;
            if algorithm != "sha256" {
                return Err(ProtocolError::Parse(format!(
                    "design file: unsupported seal algorithm `{algorithm}`"
                )));
            }
            Some(require(sec, "hash", "design file")?.to_string())
        }
    };

    Ok(DesignDocument {
        design,
        predictions,
        seal,
    })
}

/// Parses a design file that must be sealed, verifies the seal, and returns
/// the sealed design. Missing predictions or seal are a protocol violation
/// (measurements may not be evaluated against an unsealed design); a hash
/// mismatch is reported as tampering.
pub fn parse_sealed_design_text(text: &str) -> Result<SealedDesign, ProtocolError> {
    let doc = parse_design_text(text)?;
    let (predictions, seal) = match (doc.predictions, doc.seal) {
        (Some(p), Some(s)) => (p, s),
        _ => return Err(ProtocolError::Unsealed),
    };
    let sealed = SealedDesign {
        design: doc.design,
        predictions,
        seal,
    };
    sealed.verify()?;
    Ok(sealed)
}

fn format_quantity(q: &Quantity) -> String {
    format!("{:e} {:e} {}", q.value(), q.sigma(), q.dim())
}

/// Renders an unsealed design file.
pub fn write_design_text(design: &Design) -> String {
    let mut out = String::new();
    out.push_str("[design]\n");
    out.push_str(&format!("channel = {}\n", design.channel.label()));
    out.push_str(&format!("epsilon = {:e}\n", design.epsilon));
    out.push_str(&format!("confidence = {:e}\n", design.confidence));
    out.push_str(&format!("committed_at = {}\n", design.committed_at));
    out.push_str("\n[c]\n");
    out.push_str(&format!("c = {}\n", format_quantity(&design.c)));
    out.push_str("\n[rho]\n");
    out.push_str(&format!("a = {}\n", format_quantity(&design.rho_a)));
    out.push_str(&format!("b = {}\n", format_quantity(&design.rho_b)));
    out.push_str("\n[g]\n");
    out.push_str(&format!("A = {}\n", format_quantity(&design.g_a)));
    out.push_str(&format!("B = {}\n", format_quantity(&design.g_b)));
    out
}

/// Renders a sealed design file: the design plus predictions and seal.
pub fn write_sealed_design_text(sealed: &SealedDesign) -> String {
    let mut out = write_design_text(&sealed.design);
    out.push_str("\n[predictions]\n");
    for cell in CellId::ALL {
        out.push_str(&format!(
            "{} = {}\n",
            cell.label(),
            format_quantity(sealed.predictions.get(cell))
        ));
    }
    out.push_str("\n[seal]\n");
    out.push_str("algorithm = sha256\n");
    out.push_str(&format!("hash = {}\n", sealed.seal));
    out
}

/// Seals a parsed (unsealed) design: computes predictions, hashes the
/// commitment, and returns the sealed design ready for serialization.
pub fn seal_document(design: Design) -> Result<SealedDesign, ProtocolError> {
    let predictions = predict(&design)?;
    let digest = Sha256::digest(commitment_bytes(&design, &predictions));
    Ok(SealedDesign {
        design,
        predictions,
        seal: hex::encode(digest),
    })
}

/// Reads the four cell measurements from CSV with header
/// `cell,value,sigma,unit`. Every cell must appear exactly once.
pub fn read_measurements_csv<R: Read>(input: R) -> Result<Measurements, ProtocolError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| ProtocolError::Csv(format!("cannot read header: {e}")))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != MEASUREMENTS_HEADER {
        return Err(ProtocolError::Csv(format!(
            "header mismatch: expected {:?}, got {:?}",
            MEASUREMENTS_HEADER, got
        )));
    }
    let mut cells: [Option<Quantity>; 4] = [None, None, None, None];
    for record in rdr.records() {
        let record = record.map_err(|e| ProtocolError::Csv(e.to_string()))?;
        let line = record
            .position()
            .map(|p| p.line().to_string())
            .unwrap_or_else(|| "?".to_string());
        let get = |idx: usize, name: &str| -> Result<String, ProtocolError> {
            record
                .get(idx)
                .map(|s| s.to_string())
                .ok_or_else(|| ProtocolError::Csv(format!("line {line}: missing `{name}`")))
        };
        let cell = CellId::parse(&get(0, "cell")?)
            .map_err(|e| ProtocolError::Csv(format!("line {line}: {e}")))?;
        let value: f64 = get(1, "value")?
            .parse()
            .map_err(|_| ProtocolError::Csv(format!("line {line}: bad value")))?;
        let sigma: f64 = get(2, "sigma")?
            .parse()
            .map_err(|_| ProtocolError::Csv(format!("line {line}: bad sigma")))?;
        let unit_str = get(3, "unit")?;
        let unit = parse_unit(&unit_str)
            .map_err(|e| ProtocolError::Csv(format!("line {line}: bad unit `{unit_str}`: {e}")))?;
        let q = Quantity::new(value * unit.factor, sigma * unit.factor, unit.dim)
            .map_err(|e| ProtocolError::Csv(format!("line {line}: {e}")))?;
        let slot = &mut cells[CellId::ALL.iter().position(|c| *c == cell).unwrap()];
        if slot.is_some() {
            return Err(ProtocolError::Csv(format!(
                "line {line}: duplicate cell `{}`",
                cell.label()
            )));
        }
        *slot = Some(q);
    }
    let mut take = |cell: CellId| -> Result<Quantity, ProtocolError> {
        cells[CellId::ALL.iter().position(|c| *c == cell).unwrap()]
            .take()
            .ok_or_else(|| ProtocolError::Csv(format!("missing cell `{}`", cell.label())))
    };
    Ok(Measurements {
        aa: take(CellId::Aa)?,
        ab: take(CellId::Ab)?,
        ba: take(CellId::Ba)?,
        bb: take(CellId::Bb)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample_design() -> Design {
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
    fn unsealed_design_round_trips() {
        let text = write_design_text(&sample_design());
        let doc = parse_design_text(&text).unwrap();
        assert_eq!(doc.design.channel, ChannelId::VPhonon);
        assert_relative_eq!(doc.design.epsilon, 0.1);
        assert_relative_eq!(doc.design.rho_b.value(), 2.0);
        assert!(doc.predictions.is_none());
        assert!(doc.seal.is_none());
    }

    #[test]
    fn sealed_design_round_trips_and_verifies() {
        let sealed = seal_document(sample_design()).unwrap();
        let text = write_sealed_design_text(&sealed);
        let reloaded = parse_sealed_design_text(&text).unwrap();
        assert_eq!(reloaded.seal, sealed.seal);
        assert_relative_eq!(
            reloaded.predictions.bb.value(),
            sealed.predictions.bb.value()
        );
    }

    #[test]
    fn units_in_design_files_are_converted() {
        let text = "\
[design]
channel = IVb-QPEnv
epsilon = 0.1
confidence = 0.95
committed_at = t0

[c]
c = 1 0 1

[rho]
a = 1 0.01 1/um^3
b = 2 0.02 1/um^3

[g]
A = 3 0 um^3/s
B = 4 0 um^3/s
";
        let doc = parse_design_text(text).unwrap();
        // 1/um^3 = 1e18 1/m^3.
        assert_relative_eq!(doc.design.rho_a.value(), 1.0e18, max_relative = 1e-12);
        assert_relative_eq!(doc.design.rho_a.sigma(), 1.0e16, max_relative = 1e-12);
        // Predictions must be rates in 1/s.
        let p = predict(&doc.design).unwrap();
        assert_eq!(p.aa.dim(), crate::units::Dim::TIME.recip());
        assert_relative_eq!(p.aa.value(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn evaluating_unsealed_text_is_a_protocol_violation() {
        let text = write_design_text(&sample_design());
        let err = parse_sealed_design_text(&text).unwrap_err();
        assert!(matches!(err, ProtocolError::Unsealed));
    }

    #[test]
    fn tampered_file_fails_seal_verification() {
        let sealed = seal_document(sample_design()).unwrap();
        let text = write_sealed_design_text(&sealed);
        // Flip rho.b from 2 to 2.5 in the serialized file.
        let tampered = text.replace("b = 2e0 0e0 1", "b = 2.5e0 0e0 1");
        assert_ne!(text, tampered);
        let err = parse_sealed_design_text(&tampered).unwrap_err();
        assert!(matches!(err, ProtocolError::SealViolation { .. }));
    }

    #[test]
    fn missing_sections_are_reported() {
        let err = parse_design_text("[design]\nchannel = V-Phonon\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("epsilon"), "{msg}");
    }

    #[test]
    fn measurements_csv_round_trip() {
        let csv_text = "\
cell,value,sigma,unit
aA,3.0,0.1,1
aB,4.0,0.1,1
bA,6.0,0.2,1
bB,8.0,0.2,1
";
        let meas = read_measurements_csv(csv_text.as_bytes()).unwrap();
        assert_relative_eq!(meas.bb.value(), 8.0);
        assert_relative_eq!(meas.ab.sigma(), 0.1);
    }

    #[test]
    fn measurements_csv_units_convert() {
        let csv_text = "\
cell,value,sigma,unit
aA,3.0,0.1,1/ms
aB,4.0,0.1,1/ms
bA,6.0,0.2,1/ms
bB,8.0,0.2,1/ms
";
        let meas = read_measurements_csv(csv_text.as_bytes()).unwrap();
        assert_relative_eq!(meas.aa.value(), 3000.0, max_relative = 1e-12);
        assert_eq!(meas.aa.dim(), crate::units::Dim::TIME.recip());
    }

    #[test]
    fn measurements_csv_catches_missing_and_duplicate_cells() {
        let missing = "cell,value,sigma,unit\naA,3,0,1\naB,4,0,1\nbA,6,0,1\n";
        let err = read_measurements_csv(missing.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("missing cell `bB`"));

        let dup = "cell,value,sigma,unit\naA,3,0,1\naA,4,0,1\nbA,6,0,1\nbB,8,0,1\n";
        let err = read_measurements_csv(dup.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("duplicate cell `aA`"));
    }

    #[test]
    fn measurements_csv_rejects_wrong_header() {
        let bad = "cell,val,sigma,unit\naA,3,0,1\n";
        assert!(read_measurements_csv(bad.as_bytes()).is_err());
    }
}
