//! Run outputs and the reproducibility manifest.
//!
//! Every command produces a report (printed to stdout) and, with
//! `--out DIR`, writes the report, any data files, and a `manifest.json`
//! capturing everything that determined the outputs: subcommand, input
//! paths, resolved configuration, seed, and output names. Two runs with
//! identical manifests produce byte-identical outputs.

use std::collections::BTreeMap;
use std::path::Path;

use prescriptor_core::units::Quantity;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// The result of a successfully executed command.
pub struct RunOutput {
    /// Human-readable report; printed to stdout and saved as `report.txt`.
    pub report: String,
    /// Extra artifacts: (file name, contents).
    pub files: Vec<(String, String)>,
    /// Input file paths, as given on the command line.
    pub inputs: Vec<String>,
    /// Resolved configuration values that determined the outputs.
    pub config: BTreeMap<String, Value>,
    /// Seed used, when the command involves randomness.
    pub seed: Option<u64>,
    /// Exit code; non-zero for domain findings such as a failed
    /// conformance check.
    pub exit_code: i32,
}

impl RunOutput {
    pub fn new(report: String) -> RunOutput {
        RunOutput {
            report,
            files: Vec::new(),
            inputs: Vec::new(),
            config: BTreeMap::new(),
            seed: None,
            exit_code: 0,
        }
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'a str,
    version: &'a str,
    subcommand: &'a str,
    inputs: &'a [String],
    config: &'a BTreeMap<String, Value>,
    seed: Option<u64>,
    outputs: Vec<String>,
}

/// Writes `report.txt`, the artifacts, and `manifest.json` into `dir`.
pub fn write_outputs(dir: &Path, subcommand: &str, output: &RunOutput) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| {
        CliError::domain(format!("cannot create `{}`: {e}", dir.display()))
    })?;
    let mut names: Vec<String> = vec!["report.txt".to_string()];
    std::fs::write(dir.join("report.txt"), &output.report)
        .map_err(|e| CliError::domain(format!("cannot write report.txt: {e}")))?;
    for (name, contents) in &output.files {
        std::fs::write(dir.join(name), contents)
            .map_err(|e| CliError::domain(format!("cannot write {name}: {e}")))?;
        names.push(name.clone());
    }
    names.sort();
    let manifest = RunManifest {
        tool: "prescriptor",
        version: env!("CARGO_PKG_VERSION"),
        subcommand,
        inputs: &output.inputs,
        config: &output.config,
        seed: output.seed,
        outputs: names,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::domain(format!("cannot encode manifest: {e}")))?;
    std::fs::write(dir.join("manifest.json"), json + "\n")
        .map_err(|e| CliError::domain(format!("cannot write manifest.json: {e}")))?;
    Ok(())
}

/// Renders named quantities as CSV: a pinned header, a units comment, and
/// one row per quantity with value and sigma stated in the row's unit.
pub fn quantities_csv(rows: &[(String, &Quantity)]) -> String {
    let mut out = String::from("quantity,value,sigma,unit\n");
    out.push_str("# units: value and sigma are stated in the unit column\n");
    for (name, q) in rows {
        out.push_str(&format!("{name},{:e},{:e},{}\n", q.value(), q.sigma(), q.dim()));
    }
    out
}

/// `value sigma unit` display for report lines, e.g. `2.6e12 1.2e11 1/m^2`.
pub fn show_quantity(q: &Quantity) -> String {
    format!("{:e} ± {:e} {}", q.value(), q.sigma(), q.dim())
}
