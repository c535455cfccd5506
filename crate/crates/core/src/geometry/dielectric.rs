//! Dielectric loss: energy-weighted loss tangent, participation ratios, and
//! the surface-loss coupling functional.

use std::collections::BTreeMap;

use super::GeometryError;
use crate::numerics::CompensatedSum;
use crate::units::{Dim, Quantity};

/// One cell of an electric-field energy grid.
#[derive(Debug, Clone)]
pub struct FieldCell {
    /// Permittivity in F/m.
    pub eps_f_per_m: f64,
    /// Squared electric-field magnitude in V^2/m^2.
    pub e2_v2_per_m2: f64,
    /// Loss tangent of the material filling the cell (dimensionless).
    pub tan_delta: f64,
    /// Cell volume in m^3.
    pub vol_m3: f64,
    /// Material/region label, e.g. "edge", "bulk", "substrate".
    pub region: String,
}

impl FieldCell {
    fn energy_weight(&self) -> f64 {
        self.eps_f_per_m * self.e2_v2_per_m2 * self.vol_m3
    }
}

/// An electric-field energy grid over labelled material regions.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    cells: Vec<FieldCell>,
}

impl FieldGrid {
    pub fn new(cells: Vec<FieldCell>) -> Result<Self, GeometryError> {
        if cells.is_empty() {
            return Err(GeometryError::InvalidFieldGrid(
                "field grid has no cells".to_string(),
            ));
        }
        for (i, c) in cells.iter().enumerate() {
            let finite = c.eps_f_per_m.is_finite()
                && c.e2_v2_per_m2.is_finite()
                && c.tan_delta.is_finite()
                && c.vol_m3.is_finite();
            if !finite {
                return Err(GeometryError::InvalidFieldGrid(format!(
                    "cell {i} has a non-finite entry"
                )));
            }
            if c.eps_f_per_m <= 0.0 {
                return Err(GeometryError::InvalidFieldGrid(format!(
                    "cell {i}: permittivity must be positive, got {}",
                    c.eps_f_per_m
                )));
            }
            if c.e2_v2_per_m2 < 0.0 {
                return Err(GeometryError::InvalidFieldGrid(format!(
                    "cell {i}: squared field must be non-negative, got {}",
                    c.e2_v2_per_m2
                )));
            }
            if c.tan_delta < 0.0 {
                return Err(GeometryError::InvalidFieldGrid(format!(
                    "cell {i}: loss tangent must be non-negative, got {}",
                    c.tan_delta
                )));
            }
            if c.vol_m3 <= 0.0 {
                return Err(GeometryError::InvalidFieldGrid(format!(
                    "cell {i}: volume must be positive, got {}",
                    c.vol_m3
                )));
            }
            if c.region.trim().is_empty() {
                return Err(GeometryError::InvalidFieldGrid(format!(
                    "cell {i}: region label is empty"
                )));
            }
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[FieldCell] {
        &self.cells
    }

    /// Sorted list of distinct region labels.
    pub fn regions(&self) -> Vec<String> {
        let mut set: Vec<String> = self.cells.iter().map(|c| c.region.clone()).collect();
        set.sort();
        set.dedup();
        set
    }

    fn total_energy(&self) -> Result<f64, GeometryError> {
        let mut sum = CompensatedSum::new();
        for c in &self.cells {
            sum.add(c.energy_weight());
        }
        let total = sum.value();
        if total <= 0.0 {
            return Err(GeometryError::InvalidFieldGrid(
                "total electric energy is zero; nothing to weight by".to_string(),
            ));
        }
        Ok(total)
    }
}

/// Energy-weighted effective inverse quality factor of the dielectric:
///
/// ```text
/// Q^-1 = sum(eps |E|^2 tan_delta vol) / sum(eps |E|^2 vol)
/// ```
///
/// Dimensionless; lies between the minimum and maximum cell loss tangents.
pub fn q_inv_dielectric(grid: &FieldGrid) -> Result<Quantity, GeometryError> {
    let total = grid.total_energy()?;
    let mut weighted = CompensatedSum::new();
    for c in grid.cells() {
        weighted.add(c.energy_weight() * c.tan_delta);
    }
    Ok(Quantity::exact(weighted.value() / total, Dim::NONE))
}

/// Electric-energy participation ratio of one region: the fraction of the
/// total electric energy stored in cells labelled `region`.
pub fn participation(grid: &FieldGrid, region: &str) -> Result<Quantity, GeometryError> {
    let total = grid.total_energy()?;
    let mut found = false;
    let mut sum = CompensatedSum::new();
    for c in grid.cells() {
        if c.region == region {
            found = true;
            sum.add(c.energy_weight());
        }
    }
    if !found {
        return Err(GeometryError::UnknownRegion {
            region: region.to_string(),
            available: grid.regions().join(", "),
        });
    }
    Ok(Quantity::exact(sum.value() / total, Dim::NONE))
}

/// Participation ratios for every region, keyed by label.
pub fn participation_map(grid: &FieldGrid) -> Result<BTreeMap<String, Quantity>, GeometryError> {
    let mut map = BTreeMap::new();
    for region in grid.regions() {
        let p = participation(grid, &region)?;
        map.insert(region, p);
    }
    Ok(map)
}

/// Surface-loss coupling functional for curvature-activated dielectric loss:
///
/// ```text
/// G = p_edge * alpha      [m^2]
/// ```
///
/// where `p_edge` is the electric-energy participation of `edge_region` and
/// `alpha` (m^2) converts curvature concentration into excess loss tangent.
/// Together with the baseline loss tangent as the channel constant, the
/// first-order loss budget reads `Q^-1 = tan_delta_0 * (1 + mu2 * G)`.
pub fn g_one(
    grid: &FieldGrid,
    edge_region: &str,
    alpha: &Quantity,
) -> Result<Quantity, GeometryError> {
    let area = Dim::LENGTH.powi(2);
    if alpha.dim() != area {
        return Err(GeometryError::Units(format!(
            "alpha must have dimension m^2, got {}",
            alpha.dim()
        )));
    }
    if alpha.value() < 0.0 {
        return Err(GeometryError::InvalidFieldGrid(format!(
            "alpha must be non-negative, got {:e}",
            alpha.value()
        )));
    }
    let p_edge = participation(grid, edge_region)?;
    Ok(p_edge.mul(alpha))
}
