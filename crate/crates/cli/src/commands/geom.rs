//! `geom`: geometry coupling functionals from device descriptions.

use clap::{Args, Subcommand};
use prescriptor_core::geometry::{
    g_phi, participation, participation_map, q_inv_dielectric, read_field_grid_path,
    read_loop_path, read_seam_path, read_surface_path, y_seam, DEFAULT_CLEARANCE_M,
};
use prescriptor_core::units::{Dim, Quantity};
use serde_json::json;

use crate::args::{length_flag, quantity_flag};
use crate::config::FileConfig;
use crate::error::CliError;
use crate::output::{quantities_csv, show_quantity, RunOutput};

#[derive(Debug, Subcommand)]
pub enum GeomCmd {
    /// Flux-noise sensitivity functional of a loop over a spin-bearing
    /// surface (T^2 A^-2 m^2).
    Gphi(GphiArgs),
    /// Seam admittance coupling functional from a current trace (S/m).
    Yseam(YseamArgs),
    /// Dielectric inverse quality factor of a field grid.
    Qinv(QinvArgs),
    /// Electric-energy participation of one region.
    Participation(ParticipationArgs),
}

#[derive(Debug, Args)]
pub struct GphiArgs {
    /// Loop polyline CSV (`x_m,y_m,z_m`).
    pub loop_file: std::path::PathBuf,
    /// Surface patch CSV (`x_m,y_m,z_m,area_m2`).
    pub surface: std::path::PathBuf,
    /// Thin-wire clearance, e.g. `1e-9 m`.
    #[arg(long)]
    pub clearance: Option<String>,
}

#[derive(Debug, Args)]
pub struct YseamArgs {
    /// Seam current trace CSV (`s_m,Js_A_per_m`).
    pub seam: std::path::PathBuf,
    /// Angular mode frequency, e.g. `3.77e10 1/s`.
    #[arg(long)]
    pub omega: String,
    /// Stored mode energy, e.g. `1e-18 J`.
    #[arg(long)]
    pub stored_energy: String,
}

#[derive(Debug, Args)]
pub struct QinvArgs {
    /// Field grid CSV (cells with region, permittivity, field, volume,
    /// loss tangent).
    pub grid: std::path::PathBuf,
}

#[derive(Debug, Args)]
pub struct ParticipationArgs {
    /// Field grid CSV.
    pub grid: std::path::PathBuf,
    /// Region name.
    #[arg(long)]
    pub region: String,
}

pub fn gphi(args: &GphiArgs, cfg: &FileConfig) -> Result<RunOutput, CliError> {
    let clearance = match &args.clearance {
        Some(text) => length_flag(text, "clearance")?,
        None => cfg.clearance_m.unwrap_or(DEFAULT_CLEARANCE_M),
    };
    let loop_ = read_loop_path(&args.loop_file)?;
    let surface = read_surface_path(&args.surface)?;
    let g = g_phi(&loop_, &surface, clearance)?;
    let report = format!(
        "flux-noise sensitivity functional\n\
         loop: {} vertices, perimeter {:e} m\n\
         surface: {} patches, total area {:e} m^2\n\
         g_phi: {}\n",
        loop_.vertices().len(),
        loop_.perimeter(),
        surface.patches().len(),
        surface.total_area(),
        show_quantity(&g),
    );
    let mut output = RunOutput::new(report);
    output
        .files
        .push(("results.csv".to_string(), quantities_csv(&[("g_phi".to_string(), &g)])));
    output.inputs.push(args.loop_file.display().to_string());
    output.inputs.push(args.surface.display().to_string());
    output.config.insert("clearance_m".to_string(), json!(clearance));
    Ok(output)
}

pub fn yseam(args: &YseamArgs) -> Result<RunOutput, CliError> {
    let omega = quantity_flag(&args.omega, Some((Dim::TIME.recip(), "1/s")), "omega")?;
    let energy_dim = Dim::MASS * Dim::LENGTH.powi(2) / Dim::TIME.powi(2);
    let u_stored = quantity_flag(&args.stored_energy, Some((energy_dim, "J")), "stored-energy")?;
    let seam = read_seam_path(&args.seam)?;
    let y = y_seam(&seam, &omega, &u_stored)?;
    let report = format!(
        "seam admittance functional\n\
         seam: {} samples, length {:e} m\n\
         omega: {:e} 1/s, stored energy: {:e} J\n\
         y_seam: {}\n",
        seam.samples().len(),
        seam.length(),
        omega.value(),
        u_stored.value(),
        show_quantity(&y),
    );
    let mut output = RunOutput::new(report);
    output
        .files
        .push(("results.csv".to_string(), quantities_csv(&[("y_seam".to_string(), &y)])));
    output.inputs.push(args.seam.display().to_string());
    output.config.insert("omega_per_s".to_string(), json!(omega.value()));
    output.config.insert("stored_energy_j".to_string(), json!(u_stored.value()));
    Ok(output)
}

pub fn qinv(args: &QinvArgs) -> Result<RunOutput, CliError> {
    let grid = read_field_grid_path(&args.grid)?;
    let q_inv = q_inv_dielectric(&grid)?;
    let map = participation_map(&grid)?;
    let mut report = format!(
        "dielectric loss of {} cells across {} regions\n",
        grid.cells().len(),
        map.len(),
    );
    let mut rows: Vec<(String, &Quantity)> = vec![("q_inv".to_string(), &q_inv)];
    report.push_str(&format!("q_inv: {}\n", show_quantity(&q_inv)));
    for (region, p) in &map {
        report.push_str(&format!("participation[{region}]: {}\n", show_quantity(p)));
        rows.push((format!("p_{region}"), p));
    }
    let mut output = RunOutput::new(report);
    output.files.push(("results.csv".to_string(), quantities_csv(&rows)));
    output.inputs.push(args.grid.display().to_string());
    Ok(output)
}

pub fn participation_cmd(args: &ParticipationArgs) -> Result<RunOutput, CliError> {
    let grid = read_field_grid_path(&args.grid)?;
    let p = participation(&grid, &args.region)?;
    let report = format!(
        "electric-energy participation of region `{}`: {}\n",
        args.region,
        show_quantity(&p),
    );
    let mut output = RunOutput::new(report);
    output.files.push((
        "results.csv".to_string(),
        quantities_csv(&[(format!("p_{}", args.region), &p)]),
    ));
    output.inputs.push(args.grid.display().to_string());
    output.config.insert("region".to_string(), json!(args.region));
    Ok(output)
}
