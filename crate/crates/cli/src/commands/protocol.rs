//! `protocol`: pre-committed 2x2 factorial designs — predict-and-seal,
//! then evaluate measurements against the frozen predictions.

use std::fs::File;

use clap::{Args, Subcommand, ValueEnum};
use prescriptor_core::protocol::{
    evaluate, parse_design_text, parse_sealed_design_text, read_measurements_csv,
    seal_document, write_sealed_design_text, CellId, SigmaMode,
};
use serde_json::json;

use crate::config::FileConfig;
use crate::error::CliError;
use crate::output::{show_quantity, RunOutput};

#[derive(Debug, Subcommand)]
pub enum ProtocolCmd {
    /// Compute the four cell predictions of a design and seal them with a
    /// content hash. The output must be archived before data taking.
    Predict(PredictArgs),
    /// Evaluate measurements against a sealed design: row/column ratio
    /// tests and the verdict.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Unsealed design file.
    pub design: std::path::PathBuf,
    /// Commitment timestamp recorded in the seal; the literal `now` uses
    /// the current UTC time. Defaults to the timestamp already in the file.
    #[arg(long)]
    pub committed_at: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaModeArg {
    /// First-order (delta-method) uncertainty propagation.
    FirstOrder,
    /// Monte-Carlo resampling cross-check.
    MonteCarlo,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Sealed design file.
    pub design: std::path::PathBuf,
    /// Measurements CSV (`cell,value,sigma,unit`).
    pub measurements: std::path::PathBuf,
    /// How ratio-test uncertainties are propagated.
    #[arg(long, value_enum, default_value_t = SigmaModeArg::FirstOrder)]
    pub sigma_mode: SigmaModeArg,
    /// Monte-Carlo sample count (monte-carlo mode only).
    #[arg(long)]
    pub mc_samples: Option<usize>,
    /// Monte-Carlo seed (monte-carlo mode only).
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn predict(args: &PredictArgs) -> Result<RunOutput, CliError> {
    let text = std::fs::read_to_string(&args.design)?;
    let document = parse_design_text(&text)?;
    let mut design = document.design;
    let committed_at = match args.committed_at.as_deref() {
        Some("now") => chrono::Utc::now()
            .to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        Some(value) => value.to_string(),
        None => design.committed_at.clone(),
    };
    design.committed_at = committed_at.clone();
    let sealed = seal_document(design)?;

    let mut report = format!(
        "sealed 2x2 design for channel {}\ncommitted_at: {committed_at}\n\npredictions:\n",
        sealed.design.channel.label(),
    );
    for cell in CellId::ALL {
        report.push_str(&format!(
            "  {}: {}\n",
            cell.label(),
            show_quantity(sealed.predictions.get(cell)),
        ));
    }
    report.push_str(&format!("\nseal: sha256 {}\n", sealed.seal));
    report.push_str("archive the sealed design before acquiring measurements\n");

    let mut output = RunOutput::new(report);
    output
        .files
        .push(("sealed.design".to_string(), write_sealed_design_text(&sealed)));
    output.inputs.push(args.design.display().to_string());
    output.config.insert("committed_at".to_string(), json!(committed_at));
    Ok(output)
}

pub fn evaluate_cmd(args: &EvaluateArgs, cfg: &FileConfig) -> Result<RunOutput, CliError> {
    let text = std::fs::read_to_string(&args.design)?;
    let sealed = parse_sealed_design_text(&text)?;
    let measurements = read_measurements_csv(File::open(&args.measurements)?)?;
    let (mode, seed) = match args.sigma_mode {
        SigmaModeArg::FirstOrder => (SigmaMode::FirstOrder, None),
        SigmaModeArg::MonteCarlo => {
            let n_samples = args.mc_samples.or(cfg.mc_samples).unwrap_or(20_000);
            let seed = args.seed.or(cfg.seed).unwrap_or(0);
            (SigmaMode::MonteCarlo { n_samples, seed }, Some(seed))
        }
    };
    let evaluation = evaluate(&sealed, &measurements, mode)?;

    let mut report = format!(
        "2x2 evaluation for channel {} (seal verified: {})\n",
        sealed.design.channel.label(),
        sealed.seal,
    );
    report.push_str(&format!(
        "gates: |residual| <= {:e}, z <= {:.4} ({}% confidence)\n\n",
        evaluation.epsilon,
        evaluation.z_critical,
        100.0 * evaluation.confidence,
    ));
    let mut csv = String::from(
        "test,axis,measured_ratio,predicted_ratio,residual,sigma_residual,z,pass\n",
    );
    csv.push_str("# units: measured_ratio=1 predicted_ratio=1 residual=1 sigma_residual=1 z=1 pass=bool\n");
    for t in &evaluation.tests {
        report.push_str(&format!(
            "{}: measured {:.6e}, predicted {:.6e}, residual {:e} ± {:e}, z {:.3} -> {}\n",
            t.label,
            t.measured_ratio,
            t.predicted_ratio,
            t.residual,
            t.sigma_residual,
            t.z,
            if t.low_power {
                "low power"
            } else if t.pass {
                "pass"
            } else {
                "fail"
            },
        ));
        csv.push_str(&format!(
            "{},{:?},{:e},{:e},{:e},{:e},{:e},{}\n",
            t.label.replace(',', ";"),
            t.axis,
            t.measured_ratio,
            t.predicted_ratio,
            t.residual,
            t.sigma_residual,
            t.z,
            t.pass,
        ));
    }
    report.push_str(&format!("\nverdict: {}\n", evaluation.status));

    let mut output = RunOutput::new(report);
    output.files.push(("tests.csv".to_string(), csv));
    output.inputs.push(args.design.display().to_string());
    output.inputs.push(args.measurements.display().to_string());
    output.config.insert(
        "sigma_mode".to_string(),
        json!(match args.sigma_mode {
            SigmaModeArg::FirstOrder => "first-order",
            SigmaModeArg::MonteCarlo => "monte-carlo",
        }),
    );
    if let SigmaMode::MonteCarlo { n_samples, .. } = mode {
        output.config.insert("mc_samples".to_string(), json!(n_samples));
        output.config.insert("seed".to_string(), json!(seed));
        output.seed = seed;
    }
    Ok(output)
}
