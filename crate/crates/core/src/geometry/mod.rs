//! Geometry coupling functionals: thin-wire magnetic fields, flux-noise
//! sensitivity surfaces, seam admittance, and dielectric participation.
//!
//! Each functional maps a concrete device geometry to the coupling factor `G`
//! of one loss channel, keeping the microstructure density `rho` and the
//! material constant `C` cleanly separated.

pub mod csv;
pub mod dielectric;
pub mod polyline;
pub mod seam;
pub mod surface;
pub mod vec3;

pub use csv::{
    read_field_grid, read_field_grid_path, read_loop, read_loop_path, read_seam, read_seam_path,
    read_surface, read_surface_path, FIELD_GRID_HEADER, LOOP_HEADER, SEAM_HEADER, SURFACE_HEADER,
};
pub use dielectric::{
    g_one, participation, participation_map, q_inv_dielectric, FieldCell, FieldGrid,
};
pub use polyline::{biot_savart, LoopPolyline, DEFAULT_CLEARANCE_M, MU_0};
pub use seam::{y_seam, SeamTrace};
pub use surface::{flux_sensitivity_dim, g_phi, SurfacePatch, SurfacePatchGrid};

/// Errors from geometry construction and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("invalid field point: {0}")]
    InvalidPoint(String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid seam trace: {0}")]
    InvalidSeam(String),
    #[error("invalid field grid: {0}")]
    InvalidFieldGrid(String),
    #[error(
        "field point is {distance_m:e} m from conductor segment {index}, \
         closer than the clearance {clearance_m:e} m; the thin-wire field \
         diverges there"
    )]
    PointTooCloseToConductor {
        index: usize,
        distance_m: f64,
        clearance_m: f64,
    },
    #[error("unknown region `{region}`; available: {available}")]
    UnknownRegion { region: String, available: String },
    #[error("units: {0}")]
    Units(String),
    #[error("csv: {0}")]
    Csv(String),
}
