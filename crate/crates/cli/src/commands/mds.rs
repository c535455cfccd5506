//! `mds`: minimum-dataset parsing, grading, and canonical formatting.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use prescriptor_core::mds::{
    parse_mds, serialize_mds, validate, Grade, Strictness,
};
use serde_json::json;

use crate::error::{CliError, EXIT_DOMAIN};
use crate::output::RunOutput;

#[derive(Debug, Subcommand)]
pub enum MdsCmd {
    /// Parse a dataset file and report grammar or invariant violations.
    Parse(ParseArgs),
    /// Grade a dataset against a reporting bar (trend or quantitative).
    Validate(ValidateArgs),
    /// Rewrite a dataset in canonical form (or check that it already is).
    Fmt(FmtArgs),
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    /// Dataset file.
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Dataset file.
    pub file: PathBuf,
    /// Reporting bar the dataset must meet.
    #[arg(long, value_enum, default_value_t = RequireArg::Trend)]
    pub require: RequireArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RequireArg {
    Trend,
    Quantitative,
}

impl RequireArg {
    fn strictness(self) -> Strictness {
        match self {
            RequireArg::Trend => Strictness::Trend,
            RequireArg::Quantitative => Strictness::Quantitative,
        }
    }

    fn label(self) -> &'static str {
        match self {
            RequireArg::Trend => "trend",
            RequireArg::Quantitative => "quantitative",
        }
    }
}

#[derive(Debug, Args)]
pub struct FmtArgs {
    /// Dataset file.
    pub file: PathBuf,
    /// Exit non-zero if the file is not already canonical, without
    /// writing anything.
    #[arg(long)]
    pub check: bool,
}

pub fn parse_cmd(args: &ParseArgs) -> Result<RunOutput, CliError> {
    let text = std::fs::read_to_string(&args.file)?;
    let outcome = parse_mds(&text);
    let mut report = String::new();
    let exit_code = if let Some(doc) = &outcome.document {
        report.push_str(&format!("parsed `{}` cleanly\n", args.file.display()));
        report.push_str(&format!(
            "state variables: {}\ncouplings: {}\nobservables: {}\nchannels: {}\n",
            doc.state_variables.len(),
            doc.couplings.len(),
            doc.observables.len(),
            doc.channels()
                .iter()
                .map(|c| c.label())
                .collect::<Vec<_>>()
                .join(", "),
        ));
        0
    } else {
        report.push_str(&format!(
            "`{}` has {} issue(s)\n",
            args.file.display(),
            outcome.issues.len(),
        ));
        for issue in &outcome.issues {
            report.push_str(&format!("  {issue}\n"));
        }
        EXIT_DOMAIN
    };
    let mut output = RunOutput::new(report);
    output.inputs.push(args.file.display().to_string());
    output.exit_code = exit_code;
    Ok(output)
}

pub fn validate_cmd(args: &ValidateArgs) -> Result<RunOutput, CliError> {
    let text = std::fs::read_to_string(&args.file)?;
    let outcome = parse_mds(&text);
    let report_data = match &outcome.document {
        Some(doc) => validate(doc, args.require.strictness()),
        None => {
            // Grade an unparseable dataset through the same path the
            // library uses so the report shape stays uniform.
            prescriptor_core::mds::validate_text(&text, args.require.strictness())
        }
    };

    let mut report = format!(
        "dataset grade: {} (required: {})\n",
        report_data.grade.label(),
        args.require.label(),
    );
    if !report_data.channel_grades.is_empty() {
        report.push('\n');
        for (channel, grade) in &report_data.channel_grades {
            report.push_str(&format!(
                "channel {}: {}\n",
                channel.label(),
                grade.label(),
            ));
        }
    }
    if !report_data.deficiencies.is_empty() {
        report.push_str("\ndeficiencies:\n");
        for d in &report_data.deficiencies {
            let channel = d
                .channel
                .map(|c| format!("channel {} ", c.label()))
                .unwrap_or_default();
            let blocks = match d.blocks {
                Grade::Insufficient => "blocks any grade",
                Grade::Trend => "blocks trend",
                Grade::Quantitative => "blocks quantitative",
            };
            report.push_str(&format!(
                "  {channel}line {}: {} ({blocks})\n",
                d.line, d.message,
            ));
        }
    }
    report.push_str(&format!(
        "\nverdict: {}\n",
        if report_data.meets_requested {
            "meets the requested bar"
        } else {
            "does not meet the requested bar"
        },
    ));

    let mut output = RunOutput::new(report);
    output.inputs.push(args.file.display().to_string());
    output.config.insert("require".to_string(), json!(args.require.label()));
    output.exit_code = if report_data.meets_requested { 0 } else { EXIT_DOMAIN };
    Ok(output)
}

pub fn fmt_cmd(args: &FmtArgs) -> Result<RunOutput, CliError> {
    let text = std::fs::read_to_string(&args.file)?;
    let outcome = parse_mds(&text);
    let Some(doc) = &outcome.document else {
        let mut report = format!(
            "cannot format `{}`: {} issue(s)\n",
            args.file.display(),
            outcome.issues.len(),
        );
        for issue in &outcome.issues {
            report.push_str(&format!("  {issue}\n"));
        }
        let mut output = RunOutput::new(report);
        output.inputs.push(args.file.display().to_string());
        output.exit_code = EXIT_DOMAIN;
        return Ok(output);
    };
    let canonical = serialize_mds(doc);
    let already_canonical = canonical == text;

    let mut output = if args.check {
        RunOutput::new(if already_canonical {
            format!("`{}` is canonical\n", args.file.display())
        } else {
            format!("`{}` is not canonical\n", args.file.display())
        })
    } else {
        let mut out = RunOutput::new(canonical.clone());
        out.files.push(("formatted.mds".to_string(), canonical));
        out
    };
    output.inputs.push(args.file.display().to_string());
    output.config.insert("check".to_string(), json!(args.check));
    if args.check && !already_canonical {
        output.exit_code = EXIT_DOMAIN;
    }
    Ok(output)
}
