//! `budget`: coherence budgeting — allowance planning, materials limits,
//! feasibility screening, sensitivity tables, and conflict matrices.

use std::collections::BTreeMap;
use std::fs::File;

use clap::{Args, Subcommand};
use prescriptor_core::budget::{
    conflict_matrix, feasibility, parse_budget_path, plan, preset_starting_point,
    read_measured_csv, render_feasibility_report, render_plan_report, sensitivity,
    write_budget_csv, BudgetSpec, SensitivitySweep,
};
use prescriptor_core::units::{parse_unit, ChannelClass, Dim, Quantity};
use serde_json::json;

use crate::args::quantity_flag;
use crate::config::FileConfig;
use crate::error::CliError;
use crate::output::RunOutput;

#[derive(Debug, Subcommand)]
pub enum BudgetCmd {
    /// Split a relaxation-time target into per-channel loss allowances.
    Plan(PlanArgs),
    /// Back-calculate materials-side state-variable ceilings from a
    /// budget with couplings.
    Limits(LimitsArgs),
    /// Screen measured state variables against planned limits (go/no-go).
    Feasibility(FeasibilityArgs),
    /// Finite-difference sensitivity of a coupling functional along a
    /// design-parameter sweep.
    Sensitivity(SensitivityArgs),
    /// Sign matrix of coupling responses across channels: which design
    /// moves trade one channel against another.
    Conflicts(ConflictsArgs),
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Budget file; alternative to --preset/--t1.
    pub budget: Option<std::path::PathBuf>,
    /// Named allocation preset (`paper-b1`, alias `starting-point`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Relaxation-time target for the preset, e.g. `1ms`.
    #[arg(long)]
    pub t1: Option<String>,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Budget file with couplings.
    pub budget: std::path::PathBuf,
}

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    /// Budget file with couplings.
    pub budget: std::path::PathBuf,
    /// Measured state variables CSV (`channel,value,sigma,unit`).
    pub measured: std::path::PathBuf,
    /// One-sided confidence for the screening gate.
    #[arg(long)]
    pub confidence: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    /// Sweep CSV (`channel,parameter,param_value,g_value,g_sigma,g_unit`).
    pub sweeps: std::path::PathBuf,
    /// Channel class of the sweep to analyse (`I`..`V`).
    #[arg(long)]
    pub channel: Option<String>,
    /// Parameter name of the sweep to analyse.
    #[arg(long)]
    pub parameter: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConflictsArgs {
    /// Sweep CSV (`channel,parameter,param_value,g_value,g_sigma,g_unit`).
    pub sweeps: std::path::PathBuf,
}

fn spec_from_preset(preset: &str, t1: &str) -> Result<BudgetSpec, CliError> {
    let allocations = match preset {
        "paper-b1" | "starting-point" => preset_starting_point(),
        other => {
            return Err(CliError::domain(format!(
                "unknown preset `{other}` (expected `paper-b1` or `starting-point`)"
            )))
        }
    };
    let t1_target = quantity_flag(t1, Some((Dim::TIME, "seconds")), "t1")?;
    Ok(BudgetSpec {
        t1_target,
        allocations,
        couplings: BTreeMap::new(),
        omega: None,
    })
}

pub fn plan_cmd(args: &PlanArgs) -> Result<RunOutput, CliError> {
    let (spec, inputs, mut config) = match (&args.budget, &args.preset, &args.t1) {
        (Some(path), None, None) => {
            let spec = parse_budget_path(path)?;
            (spec, vec![path.display().to_string()], BTreeMap::new())
        }
        (None, Some(preset), Some(t1)) => {
            let spec = spec_from_preset(preset, t1)?;
            let mut config = BTreeMap::new();
            config.insert("preset".to_string(), json!(preset));
            config.insert("t1_target_s".to_string(), json!(spec.t1_target.value()));
            (spec, Vec::new(), config)
        }
        _ => {
            return Err(CliError::usage(
                "budget plan needs either a budget file or both --preset and --t1"
                    .to_string(),
            ))
        }
    };
    let result = plan(&spec)?;
    let mut output = RunOutput::new(render_plan_report(&result));
    output.files.push(("plan.csv".to_string(), write_budget_csv(&result)));
    output.inputs = inputs;
    output.config.append(&mut config);
    Ok(output)
}

pub fn limits(args: &LimitsArgs) -> Result<RunOutput, CliError> {
    let spec = parse_budget_path(&args.budget)?;
    let result = plan(&spec)?;
    let mut report = String::from("materials-side state-variable ceilings\n");
    let mut csv = String::from("channel,rho_limit,limit_unit,reason\n");
    csv.push_str("# units: rho_limit is stated in limit_unit; empty when skipped\n");
    for class in ChannelClass::ALL {
        if let Some(limit) = result.rho_limits.get(&class) {
            report.push_str(&format!(
                "channel {}: rho <= {:e} {} (sigma {:e})\n",
                class.label(),
                limit.value(),
                limit.dim(),
                limit.sigma(),
            ));
            csv.push_str(&format!(
                "{},{:e},{},\n",
                class.label(),
                limit.value(),
                limit.dim(),
            ));
        } else if let Some(reason) = result.skipped.get(&class) {
            report.push_str(&format!("channel {}: no limit ({reason})\n", class.label()));
            csv.push_str(&format!("{},,,{}\n", class.label(), reason.replace(',', ";")));
        }
    }
    let mut output = RunOutput::new(report);
    output.files.push(("limits.csv".to_string(), csv));
    output.inputs.push(args.budget.display().to_string());
    Ok(output)
}

pub fn feasibility_cmd(
    args: &FeasibilityArgs,
    cfg: &FileConfig,
) -> Result<RunOutput, CliError> {
    let spec = parse_budget_path(&args.budget)?;
    let result = plan(&spec)?;
    let measured = read_measured_csv(File::open(&args.measured)?)?;
    let confidence = args.confidence.or(cfg.confidence).unwrap_or(0.95);
    let screening = feasibility(&result, &measured, confidence)?;

    let mut csv = String::from(
        "channel,limit,measured,sigma,unit,usage,verdict,diminishing_returns\n",
    );
    csv.push_str("# units: limit, measured, and sigma are stated in the unit column; usage=1\n");
    for ch in &screening.channels {
        let (measured_s, sigma_s) = match &ch.measured {
            Some(m) => (format!("{:e}", m.value()), format!("{:e}", m.sigma())),
            None => (String::new(), String::new()),
        };
        let usage_s = ch.usage.map(|u| format!("{u:e}")).unwrap_or_default();
        csv.push_str(&format!(
            "{},{:e},{measured_s},{sigma_s},{},{usage_s},{},{}\n",
            ch.class.label(),
            ch.limit.value(),
            ch.limit.dim(),
            ch.verdict,
            ch.diminishing_returns,
        ));
    }

    let mut output = RunOutput::new(render_feasibility_report(&screening));
    output.files.push(("feasibility.csv".to_string(), csv));
    output.inputs.push(args.budget.display().to_string());
    output.inputs.push(args.measured.display().to_string());
    output.config.insert("confidence".to_string(), json!(confidence));
    Ok(output)
}

/// Parses the sweep CSV into per-(channel, parameter) sample groups.
fn read_sweeps(
    path: &std::path::Path,
) -> Result<BTreeMap<(ChannelClass, String), SensitivitySweep>, CliError> {
    const HEADER: [&str; 6] =
        ["channel", "parameter", "param_value", "g_value", "g_sigma", "g_unit"];
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(File::open(path)?);
    let headers = reader
        .headers()
        .map_err(|e| CliError::domain(format!("cannot read sweep header: {e}")))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != HEADER {
        return Err(CliError::domain(format!(
            "expected sweep header `{}`, got `{}`",
            HEADER.join(","),
            got.join(","),
        )));
    }
    let mut groups: BTreeMap<(ChannelClass, String), Vec<(f64, Quantity)>> = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record =
            record.map_err(|e| CliError::domain(format!("sweep line {line}: {e}")))?;
        if record.len() != 6 {
            return Err(CliError::domain(format!(
                "sweep line {line}: expected 6 fields, got {}",
                record.len(),
            )));
        }
        let class = ChannelClass::parse(&record[0])
            .map_err(|e| CliError::domain(format!("sweep line {line}: {e}")))?;
        let parameter = record[1].to_string();
        let param_value: f64 = record[2].parse().map_err(|_| {
            CliError::domain(format!("sweep line {line}: bad param_value `{}`", &record[2]))
        })?;
        let g_value: f64 = record[3].parse().map_err(|_| {
            CliError::domain(format!("sweep line {line}: bad g_value `{}`", &record[3]))
        })?;
        let g_sigma: f64 = record[4].parse().map_err(|_| {
            CliError::domain(format!("sweep line {line}: bad g_sigma `{}`", &record[4]))
        })?;
        let unit = parse_unit(&record[5]).map_err(|e| {
            CliError::domain(format!("sweep line {line}: bad g_unit `{}`: {e}", &record[5]))
        })?;
        let g = Quantity::new(g_value * unit.factor, g_sigma * unit.factor, unit.dim)
            .map_err(|e| CliError::domain(format!("sweep line {line}: {e}")))?;
        groups.entry((class, parameter)).or_default().push((param_value, g));
    }
    let mut sweeps = BTreeMap::new();
    for ((class, parameter), samples) in groups {
        let sweep = SensitivitySweep::new(parameter.clone(), samples)?;
        sweeps.insert((class, parameter), sweep);
    }
    Ok(sweeps)
}

pub fn sensitivity_cmd(args: &SensitivityArgs) -> Result<RunOutput, CliError> {
    let sweeps = read_sweeps(&args.sweeps)?;
    if sweeps.is_empty() {
        return Err(CliError::domain("sweep file contains no samples".to_string()));
    }
    let wanted_class = args
        .channel
        .as_deref()
        .map(ChannelClass::parse)
        .transpose()?;
    let mut matches: Vec<(&(ChannelClass, String), &SensitivitySweep)> = sweeps
        .iter()
        .filter(|((class, parameter), _)| {
            wanted_class.is_none_or(|c| c == *class)
                && args.parameter.as_deref().is_none_or(|p| p == parameter.as_str())
        })
        .collect();
    if matches.len() != 1 {
        let available: Vec<String> = sweeps
            .keys()
            .map(|(class, parameter)| format!("{} {parameter}", class.label()))
            .collect();
        return Err(CliError::domain(format!(
            "{} sweeps match; select one with --channel and --parameter \
             (available: {})",
            matches.len(),
            available.join(", "),
        )));
    }
    let ((class, parameter), sweep) = matches.remove(0);
    let table = sensitivity(sweep)?;

    let mut report = format!(
        "sensitivity of channel {} coupling to `{parameter}` ({} samples)\n",
        class.label(),
        sweep.samples().len(),
    );
    let mut csv = String::from("param_value,slope,slope_sigma,slope_unit\n");
    csv.push_str("# units: slope and slope_sigma are stated in slope_unit per parameter unit\n");
    for (p, slope) in &table.slopes {
        report.push_str(&format!(
            "  at {p:e}: dG/dp = {:e} ± {:e} {}\n",
            slope.value(),
            slope.sigma(),
            slope.dim(),
        ));
        csv.push_str(&format!(
            "{p:e},{:e},{:e},{}\n",
            slope.value(),
            slope.sigma(),
            slope.dim(),
        ));
    }
    report.push_str(&format!(
        "peak |dG/dp| = {:e} {}\n",
        table.peak_slope.value().abs(),
        table.peak_slope.dim(),
    ));

    let mut output = RunOutput::new(report);
    output.files.push(("sensitivity.csv".to_string(), csv));
    output.inputs.push(args.sweeps.display().to_string());
    output.config.insert("channel".to_string(), json!(class.label()));
    output.config.insert("parameter".to_string(), json!(parameter));
    Ok(output)
}

pub fn conflicts(args: &ConflictsArgs) -> Result<RunOutput, CliError> {
    let sweeps = read_sweeps(&args.sweeps)?;
    let matrix = conflict_matrix(&sweeps)?;

    let mut report = String::from("design-move conflict matrix\n\n");
    let mut csv = String::from("parameter,I,II,III,IV,V,label\n");
    csv.push_str("# units: signs are -1, 0, or +1 (coupling response direction)\n");
    for row in &matrix.rows {
        let signs: Vec<String> = ChannelClass::ALL
            .iter()
            .map(|class| {
                row.signs
                    .get(class)
                    .map(|s| format!("{s:+}"))
                    .unwrap_or_default()
            })
            .collect();
        report.push_str(&format!("{}: {}\n", row.parameter, row.label));
        for (class, sign) in ChannelClass::ALL.iter().zip(&signs) {
            if !sign.is_empty() {
                report.push_str(&format!("  channel {}: {sign}\n", class.label()));
            }
        }
        csv.push_str(&format!(
            "{},{},{}\n",
            row.parameter.replace(',', ";"),
            signs.join(","),
            row.label,
        ));
    }

    let mut output = RunOutput::new(report);
    output.files.push(("conflicts.csv".to_string(), csv));
    output.inputs.push(args.sweeps.display().to_string());
    Ok(output)
}
