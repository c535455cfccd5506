//! `prescriptor`: desk-scale toolkit for channel-wise decoherence
//! prescriptors in superconducting qubits.
//!
//! Every subcommand prints a report to stdout. With `--out DIR` the
//! report, any data artifacts, and a reproducibility manifest are also
//! written to disk. Exit codes: 0 success (including negative scientific
//! verdicts, which are results, not failures), 1 domain error or failed
//! conformance check, 2 usage error, 3 protocol-seal violation.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{budget, geom, lab, mds, protocol, stats, units};
use crate::config::FileConfig;
use crate::error::CliError;
use crate::output::{write_outputs, RunOutput};

#[derive(Debug, Parser)]
#[command(
    name = "prescriptor",
    version,
    about = "Channel-wise decoherence prescriptors: dimensional closure, \
             microstructure statistics, geometry couplings, separability \
             checks, falsification protocol, and coherence budgeting"
)]
struct Cli {
    /// JSON file with default settings (seed, confidence, resamples,
    /// resolution, clearance_m, mc_samples); explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Write report.txt, data artifacts, and manifest.json here.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensional bookkeeping for the per-channel closure chains.
    #[command(subcommand)]
    Units(units::UnitsCmd),
    /// Microstructure statistics and loss-law discrimination.
    #[command(subcommand)]
    Stats(stats::StatsCmd),
    /// Geometry coupling functionals (flux, seam, dielectric).
    #[command(subcommand)]
    Geom(geom::GeomCmd),
    /// Monte-Carlo separability checks for the factorized observable map.
    #[command(subcommand)]
    Lab(lab::LabCmd),
    /// Sealed-prediction falsification protocol (2x2 design).
    #[command(subcommand)]
    Protocol(protocol::ProtocolCmd),
    /// Coherence budgeting: allowances, limits, feasibility, conflicts.
    #[command(subcommand)]
    Budget(budget::BudgetCmd),
    /// Minimum-dataset files: parse, grade, and canonical formatting.
    #[command(subcommand)]
    Mds(mds::MdsCmd),
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Units(units::UnitsCmd::Check(_)) => "units check",
        Command::Stats(stats::StatsCmd::Mu2(_)) => "stats mu2",
        Command::Stats(stats::StatsCmd::Rms(_)) => "stats rms",
        Command::Stats(stats::StatsCmd::Discriminate(_)) => "stats discriminate",
        Command::Geom(geom::GeomCmd::Gphi(_)) => "geom gphi",
        Command::Geom(geom::GeomCmd::Yseam(_)) => "geom yseam",
        Command::Geom(geom::GeomCmd::Qinv(_)) => "geom qinv",
        Command::Geom(geom::GeomCmd::Participation(_)) => "geom participation",
        Command::Lab(lab::LabCmd::Sweep(_)) => "lab sweep",
        Command::Protocol(protocol::ProtocolCmd::Predict(_)) => "protocol predict",
        Command::Protocol(protocol::ProtocolCmd::Evaluate(_)) => "protocol evaluate",
        Command::Budget(budget::BudgetCmd::Plan(_)) => "budget plan",
        Command::Budget(budget::BudgetCmd::Limits(_)) => "budget limits",
        Command::Budget(budget::BudgetCmd::Feasibility(_)) => "budget feasibility",
        Command::Budget(budget::BudgetCmd::Sensitivity(_)) => "budget sensitivity",
        Command::Budget(budget::BudgetCmd::Conflicts(_)) => "budget conflicts",
        Command::Mds(mds::MdsCmd::Parse(_)) => "mds parse",
        Command::Mds(mds::MdsCmd::Validate(_)) => "mds validate",
        Command::Mds(mds::MdsCmd::Fmt(_)) => "mds fmt",
    }
}

fn dispatch(command: &Command, cfg: &FileConfig) -> Result<RunOutput, CliError> {
    match command {
        Command::Units(units::UnitsCmd::Check(a)) => units::check(a),
        Command::Stats(stats::StatsCmd::Mu2(a)) => stats::mu2(a, cfg),
        Command::Stats(stats::StatsCmd::Rms(a)) => stats::rms(a),
        Command::Stats(stats::StatsCmd::Discriminate(a)) => stats::discriminate_cmd(a, cfg),
        Command::Geom(geom::GeomCmd::Gphi(a)) => geom::gphi(a, cfg),
        Command::Geom(geom::GeomCmd::Yseam(a)) => geom::yseam(a),
        Command::Geom(geom::GeomCmd::Qinv(a)) => geom::qinv(a),
        Command::Geom(geom::GeomCmd::Participation(a)) => geom::participation_cmd(a),
        Command::Lab(lab::LabCmd::Sweep(a)) => lab::sweep(a, cfg),
        Command::Protocol(protocol::ProtocolCmd::Predict(a)) => protocol::predict(a),
        Command::Protocol(protocol::ProtocolCmd::Evaluate(a)) => protocol::evaluate_cmd(a, cfg),
        Command::Budget(budget::BudgetCmd::Plan(a)) => budget::plan_cmd(a),
        Command::Budget(budget::BudgetCmd::Limits(a)) => budget::limits(a),
        Command::Budget(budget::BudgetCmd::Feasibility(a)) => budget::feasibility_cmd(a, cfg),
        Command::Budget(budget::BudgetCmd::Sensitivity(a)) => budget::sensitivity_cmd(a),
        Command::Budget(budget::BudgetCmd::Conflicts(a)) => budget::conflicts(a),
        Command::Mds(mds::MdsCmd::Parse(a)) => mds::parse_cmd(a),
        Command::Mds(mds::MdsCmd::Validate(a)) => mds::validate_cmd(a),
        Command::Mds(mds::MdsCmd::Fmt(a)) => mds::fmt_cmd(a),
    }
}

fn run(cli: &Cli) -> i32 {
    let cfg = match FileConfig::load(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code;
        }
    };
    match dispatch(&cli.command, &cfg) {
        Ok(result) => {
            print!("{}", result.report);
            if let Some(dir) = &cli.out {
                if let Err(e) = write_outputs(dir, subcommand_name(&cli.command), &result) {
                    eprintln!("error: {e}");
                    return e.code;
                }
            }
            result.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    std::process::exit(run(&cli));
}
