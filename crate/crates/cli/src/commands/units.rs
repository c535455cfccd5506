//! `units check`: dimensional-closure verification.

use clap::{Args, Subcommand};
use prescriptor_core::units::{check_closure, ChannelId};
use serde_json::json;

use crate::error::CliError;
use crate::output::RunOutput;

#[derive(Debug, Subcommand)]
pub enum UnitsCmd {
    /// Verify the closure chain rho x G x c x O for one or all channels.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Check a single channel (e.g. `I`, `II`, `IVa-QPTrap`); default all.
    #[arg(long)]
    pub channel: Option<String>,
}

pub fn check(args: &CheckArgs) -> Result<RunOutput, CliError> {
    let channels: Vec<ChannelId> = match &args.channel {
        Some(name) => vec![ChannelId::parse(name)?],
        None => ChannelId::ALL.to_vec(),
    };
    let mut report = String::from("dimensional closure check\n\n");
    let mut passed = 0usize;
    for channel in &channels {
        let r = check_closure(*channel);
        passed += usize::from(r.pass);
        report.push_str(&format!(
            "channel {}: {}\n  chain: {}\n  note: {}\n",
            channel.label(),
            if r.pass { "PASS" } else { "FAIL" },
            r.chain,
            r.note,
        ));
        if !r.pass {
            report.push_str(&format!("  residual dimension: {}\n", r.residual));
        }
    }
    report.push_str(&format!("\n{passed} of {} chains closed\n", channels.len()));
    let all_pass = passed == channels.len();
    let mut output = RunOutput::new(report);
    output.config.insert(
        "channel".to_string(),
        json!(args.channel.clone().unwrap_or_else(|| "all".to_string())),
    );
    output.exit_code = if all_pass { 0 } else { 1 };
    Ok(output)
}
