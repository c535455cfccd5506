//! `stats`: microstructure statistics from witness-sample traces.

use std::fs::File;

use clap::{Args, Subcommand};
use prescriptor_core::microstructure::{
    curvature_moments, discriminate, mu2_bootstrap, rms_roughness, CurvatureTrace,
    DiscriminationConfig, HeightProfile,
};
use prescriptor_core::microstructure::csv::{
    read_curvature_samples, read_height_samples, read_split_series,
};
use serde_json::json;

use crate::args::quantity_flag;
use crate::config::FileConfig;
use crate::error::CliError;
use crate::output::{quantities_csv, show_quantity, RunOutput};
use prescriptor_core::units::Dim;

#[derive(Debug, Subcommand)]
pub enum StatsCmd {
    /// Curvature moments (mu1..mu4) of an edge trace, with optional
    /// bootstrap uncertainty on mu2.
    Mu2(Mu2Args),
    /// RMS roughness of a height profile.
    Rms(RmsArgs),
    /// Discriminate mu2 against R_RMS as the predictor of 1/T1 over a
    /// split-sample series.
    Discriminate(DiscriminateArgs),
}

#[derive(Debug, Args)]
pub struct Mu2Args {
    /// Curvature trace CSV (`s_m,kappa_per_m`).
    pub trace: std::path::PathBuf,
    /// Total edge perimeter, e.g. `4e-4 m` or `400um`.
    #[arg(long)]
    pub perimeter: String,
    /// Bootstrap resamples for the mu2 uncertainty (0 = point estimate only).
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Bootstrap seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RmsArgs {
    /// Height profile CSV (`s_m,h_m`).
    pub profile: std::path::PathBuf,
}

#[derive(Debug, Args)]
pub struct DiscriminateArgs {
    /// Split-sample series CSV
    /// (`mu2_per_m2,mu2_sigma,rrms_m,rrms_sigma,T1_s,T1_sigma`).
    pub series: std::path::PathBuf,
    /// Confidence for the one-sided bootstrap bound.
    #[arg(long)]
    pub confidence: Option<f64>,
    /// Bootstrap resamples.
    #[arg(long)]
    pub resamples: Option<usize>,
    /// Bootstrap seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn mu2(args: &Mu2Args, cfg: &FileConfig) -> Result<RunOutput, CliError> {
    let perimeter = quantity_flag(&args.perimeter, Some((Dim::LENGTH, "metres")), "perimeter")?;
    let samples = read_curvature_samples(File::open(&args.trace)?)?;
    let trace = CurvatureTrace::new(samples, perimeter.value())?;
    let moments = curvature_moments(&trace);
    let resamples = args.bootstrap.or(cfg.resamples).unwrap_or(0);
    let seed = args.seed.or(cfg.seed).unwrap_or(0);

    let mut report = format!(
        "curvature moments over perimeter {:e} m ({} sites)\n",
        trace.perimeter(),
        trace.samples().len(),
    );
    let mut rows = vec![
        ("mu1".to_string(), &moments.mu1),
        ("mu2".to_string(), &moments.mu2),
        ("mu3".to_string(), &moments.mu3),
        ("mu4".to_string(), &moments.mu4),
    ];
    for (name, q) in &rows {
        report.push_str(&format!("{name}: {}\n", show_quantity(q)));
    }
    let booted;
    if resamples > 0 {
        booted = mu2_bootstrap(&trace, resamples, seed)?;
        report.push_str(&format!(
            "mu2 with bootstrap sigma ({resamples} resamples, seed {seed}): {}\n",
            show_quantity(&booted),
        ));
        if booted.value() != 0.0 {
            report.push_str(&format!(
                "relative bootstrap sigma: {:.3}%\n",
                100.0 * booted.relative_sigma().abs()
            ));
        }
        rows.push(("mu2_bootstrap".to_string(), &booted));
    }

    let mut output = RunOutput::new(report);
    output.files.push(("results.csv".to_string(), quantities_csv(&rows)));
    output.inputs.push(args.trace.display().to_string());
    output.config.insert("perimeter_m".to_string(), json!(perimeter.value()));
    output.config.insert("bootstrap".to_string(), json!(resamples));
    if resamples > 0 {
        output.config.insert("seed".to_string(), json!(seed));
        output.seed = Some(seed);
    }
    Ok(output)
}

pub fn rms(args: &RmsArgs) -> Result<RunOutput, CliError> {
    let samples = read_height_samples(File::open(&args.profile)?)?;
    let profile = HeightProfile::new(samples)?;
    let r = rms_roughness(&profile);
    let report = format!(
        "RMS roughness over {} sites: {}\n",
        profile.samples().len(),
        show_quantity(&r),
    );
    let mut output = RunOutput::new(report);
    output
        .files
        .push(("results.csv".to_string(), quantities_csv(&[("r_rms".to_string(), &r)])));
    output.inputs.push(args.profile.display().to_string());
    Ok(output)
}

pub fn discriminate_cmd(
    args: &DiscriminateArgs,
    cfg: &FileConfig,
) -> Result<RunOutput, CliError> {
    let series = read_split_series(File::open(&args.series)?)?;
    let config = DiscriminationConfig {
        confidence: args.confidence.or(cfg.confidence).unwrap_or(0.95),
        n_resamples: args.resamples.or(cfg.resamples).unwrap_or(2000),
        seed: args.seed.or(cfg.seed).unwrap_or(0),
    };
    let r = discriminate(&series, &config)?;

    let mut report = format!(
        "predictor discrimination: {} regressed on mu2 vs R_RMS ({} samples)\n",
        r.regression_target,
        series.samples().len(),
    );
    report.push_str(&format!("r2_mu2 = {:.6}\n", r.r2_mu2));
    report.push_str(&format!("r2_rms = {:.6}\n", r.r2_rms));
    if let Some(r2_mu1) = r.r2_mu1 {
        report.push_str(&format!("r2_mu1 = {:.6} (descriptive)\n", r2_mu1));
    }
    report.push_str(&format!(
        "delta_r2 = {:.6} (one-sided lower bound at {:.0}%: {:.6}, {} of {} replicas)\n",
        r.delta_r2,
        100.0 * r.confidence,
        r.delta_r2_lower,
        r.n_valid_resamples,
        r.n_resamples,
    ));
    for w in &r.warnings {
        report.push_str(&format!("warning: {w}\n"));
    }
    report.push_str(&format!("verdict: {}\n", r.verdict));

    let mut csv = String::from("metric,value\n# units: value=1 (all metrics dimensionless)\n");
    for (name, value) in [
        ("r2_mu2", r.r2_mu2),
        ("r2_rms", r.r2_rms),
        ("delta_r2", r.delta_r2),
        ("delta_r2_lower", r.delta_r2_lower),
    ] {
        csv.push_str(&format!("{name},{value:e}\n"));
    }

    let mut output = RunOutput::new(report);
    output.files.push(("results.csv".to_string(), csv));
    output.inputs.push(args.series.display().to_string());
    output.config.insert("confidence".to_string(), json!(config.confidence));
    output.config.insert("resamples".to_string(), json!(config.n_resamples));
    output.config.insert("seed".to_string(), json!(config.seed));
    output.seed = Some(config.seed);
    Ok(output)
}
