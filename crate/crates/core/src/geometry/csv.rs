//! CSV readers for geometry inputs. Headers are part of the interface and are
//! matched exactly; `#` lines are comments.

use std::io::Read;
use std::path::Path;

use super::dielectric::{FieldCell, FieldGrid};
use super::polyline::LoopPolyline;
use super::seam::SeamTrace;
use super::surface::{SurfacePatch, SurfacePatchGrid};
use super::vec3::Vec3;
use super::GeometryError;

pub const LOOP_HEADER: [&str; 3] = ["x_m", "y_m", "z_m"];
pub const SURFACE_HEADER: [&str; 4] = ["x_m", "y_m", "z_m", "area_m2"];
pub const FIELD_GRID_HEADER: [&str; 5] = [
    "eps_F_per_m",
    "e2_V2_per_m2",
    "tan_delta",
    "vol_m3",
    "region",
];
pub const SEAM_HEADER: [&str; 2] = ["s_m", "Js_A_per_m"];

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn check_header<R: Read>(
    rdr: &mut csv::Reader<R>,
    expected: &[&str],
) -> Result<(), GeometryError> {
    let headers = rdr
        .headers()
        .map_err(|e| GeometryError::Csv(format!("cannot read header: {e}")))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(GeometryError::Csv(format!(
            "header mismatch: expected {:?}, got {:?}",
            expected, got
        )));
    }
    Ok(())
}

fn parse_field(record: &csv::StringRecord, idx: usize, name: &str) -> Result<f64, GeometryError> {
    let line = record
        .position()
        .map(|p| p.line().to_string())
        .unwrap_or_else(|| "?".to_string());
    let raw = record.get(idx).ok_or_else(|| {
        GeometryError::Csv(format!("line {line}: missing column `{name}`"))
    })?;
    raw.parse::<f64>().map_err(|_| {
        GeometryError::Csv(format!("line {line}: cannot parse `{raw}` as a number for `{name}`"))
    })
}

/// Reads loop vertices from `x_m,y_m,z_m` rows.
pub fn read_loop<R: Read>(input: R) -> Result<LoopPolyline, GeometryError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &LOOP_HEADER)?;
    let mut vertices: Vec<Vec3> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| GeometryError::Csv(e.to_string()))?;
        vertices.push([
            parse_field(&record, 0, "x_m")?,
            parse_field(&record, 1, "y_m")?,
            parse_field(&record, 2, "z_m")?,
        ]);
    }
    LoopPolyline::new(vertices)
}

pub fn read_loop_path(path: &Path) -> Result<LoopPolyline, GeometryError> {
    let file = std::fs::File::open(path)
        .map_err(|e| GeometryError::Csv(format!("{}: {e}", path.display())))?;
    read_loop(file)
}

/// Reads surface patches from `x_m,y_m,z_m,area_m2` rows.
pub fn read_surface<R: Read>(input: R) -> Result<SurfacePatchGrid, GeometryError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &SURFACE_HEADER)?;
    let mut patches = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| GeometryError::Csv(e.to_string()))?;
        patches.push(SurfacePatch {
            centroid: [
                parse_field(&record, 0, "x_m")?,
                parse_field(&record, 1, "y_m")?,
                parse_field(&record, 2, "z_m")?,
            ],
            area_m2: parse_field(&record, 3, "area_m2")?,
        });
    }
    SurfacePatchGrid::new(patches)
}

pub fn read_surface_path(path: &Path) -> Result<SurfacePatchGrid, GeometryError> {
    let file = std::fs::File::open(path)
        .map_err(|e| GeometryError::Csv(format!("{}: {e}", path.display())))?;
    read_surface(file)
}

/// Reads an electric-field energy grid from
/// `eps_F_per_m,e2_V2_per_m2,tan_delta,vol_m3,region` rows.
pub fn read_field_grid<R: Read>(input: R) -> Result<FieldGrid, GeometryError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &FIELD_GRID_HEADER)?;
    let mut cells = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| GeometryError::Csv(e.to_string()))?;
        let line = record
            .position()
            .map(|p| p.line().to_string())
            .unwrap_or_else(|| "?".to_string());
        let region = record
            .get(4)
            .ok_or_else(|| GeometryError::Csv(format!("line {line}: missing column `region`")))?
            .to_string();
        cells.push(FieldCell {
            eps_f_per_m: parse_field(&record, 0, "eps_F_per_m")?,
            e2_v2_per_m2: parse_field(&record, 1, "e2_V2_per_m2")?,
            tan_delta: parse_field(&record, 2, "tan_delta")?,
            vol_m3: parse_field(&record, 3, "vol_m3")?,
            region,
        });
    }
    FieldGrid::new(cells)
}

pub fn read_field_grid_path(path: &Path) -> Result<FieldGrid, GeometryError> {
    let file = std::fs::File::open(path)
        .map_err(|e| GeometryError::Csv(format!("{}: {e}", path.display())))?;
    read_field_grid(file)
}

/// Reads a seam surface-current trace from `s_m,Js_A_per_m` rows.
pub fn read_seam<R: Read>(input: R) -> Result<SeamTrace, GeometryError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &SEAM_HEADER)?;
    let mut samples = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| GeometryError::Csv(e.to_string()))?;
        samples.push((
            parse_field(&record, 0, "s_m")?,
            parse_field(&record, 1, "Js_A_per_m")?,
        ));
    }
    SeamTrace::new(samples)
}

pub fn read_seam_path(path: &Path) -> Result<SeamTrace, GeometryError> {
    let file = std::fs::File::open(path)
        .map_err(|e| GeometryError::Csv(format!("{}: {e}", path.display())))?;
    read_seam(file)
}
