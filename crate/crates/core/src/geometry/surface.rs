//! Surface patch grids and the flux-sensitivity coupling functional.

use super::polyline::{biot_savart, LoopPolyline};
use super::vec3::{self, Vec3};
use super::GeometryError;
use crate::numerics::CompensatedSum;
use crate::units::{Dim, Quantity, UnitsError};

/// One quadrature patch of a surface: its centroid and (positive) area.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePatch {
    pub centroid: Vec3,
    pub area_m2: f64,
}

/// A surface discretised into centroid/area patches for midpoint quadrature.
#[derive(Debug, Clone)]
pub struct SurfacePatchGrid {
    patches: Vec<SurfacePatch>,
}

impl SurfacePatchGrid {
    pub fn new(patches: Vec<SurfacePatch>) -> Result<Self, GeometryError> {
        if patches.is_empty() {
            return Err(GeometryError::InvalidSurface(
                "surface grid has no patches".to_string(),
            ));
        }
        for (i, p) in patches.iter().enumerate() {
            if !p.centroid.iter().all(|c| c.is_finite()) {
                return Err(GeometryError::InvalidSurface(format!(
                    "patch {i} centroid has a non-finite coordinate"
                )));
            }
            if !(p.area_m2.is_finite() && p.area_m2 > 0.0) {
                return Err(GeometryError::InvalidSurface(format!(
                    "patch {i} area must be finite and positive, got {}",
                    p.area_m2
                )));
            }
        }
        Ok(Self { patches })
    }

    pub fn patches(&self) -> &[SurfacePatch] {
        &self.patches
    }

    pub fn total_area(&self) -> f64 {
        compensated(self.patches.iter().map(|p| p.area_m2))
    }

    /// Annular grid in the z = 0 plane between radii `r_inner` and `r_outer`,
    /// split into `n_radial` x `n_angular` polar cells. Patch areas are the
    /// exact cell areas; centroids sit at the cell midpoints.
    pub fn annulus(
        r_inner: f64,
        r_outer: f64,
        n_radial: usize,
        n_angular: usize,
    ) -> Result<Self, GeometryError> {
        if !(r_inner.is_finite() && r_outer.is_finite() && 0.0 < r_inner && r_inner < r_outer) {
            return Err(GeometryError::InvalidSurface(format!(
                "annulus needs 0 < r_inner < r_outer, got [{r_inner}, {r_outer}]"
            )));
        }
        if n_radial == 0 || n_angular == 0 {
            return Err(GeometryError::InvalidSurface(
                "annulus needs at least one cell in each direction".to_string(),
            ));
        }
        let dr = (r_outer - r_inner) / n_radial as f64;
        let dtheta = 2.0 * std::f64::consts::PI / n_angular as f64;
        let mut patches = Vec::with_capacity(n_radial * n_angular);
        for i in 0..n_radial {
            let r0 = r_inner + dr * i as f64;
            let r1 = r0 + dr;
            let r_mid = 0.5 * (r0 + r1);
            let area = 0.5 * dtheta * (r1 * r1 - r0 * r0);
            for j in 0..n_angular {
                let theta = dtheta * (j as f64 + 0.5);
                patches.push(SurfacePatch {
                    centroid: [r_mid * theta.cos(), r_mid * theta.sin(), 0.0],
                    area_m2: area,
                });
            }
        }
        Self::new(patches)
    }

    pub fn map_centroids(
        &self,
        mut f: impl FnMut(Vec3) -> Vec3,
    ) -> Result<Self, GeometryError> {
        Self::new(
            self.patches
                .iter()
                .map(|p| SurfacePatch {
                    centroid: f(p.centroid),
                    area_m2: p.area_m2,
                })
                .collect(),
        )
    }
}

fn compensated(it: impl Iterator<Item = f64>) -> f64 {
    let mut s = CompensatedSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

/// Flux-sensitivity coupling functional of a pickup surface against a current
/// loop:
///
/// ```text
/// G_Phi = sum_patches |B/I|^2 * area     [T^2 A^-2 m^2]
/// ```
///
/// The reported sigma is a midpoint-quadrature refinement estimate, not a
/// statistical error: for each patch the integrand's local curvature is probed
/// with a centred second-difference stencil of half-width `sqrt(area)/2`, the
/// midpoint-rule error `area^2 |Laplacian| / 24` is formed per patch, and the
/// per-patch estimates are combined in quadrature. It vanishes as the grid is
/// refined (h^2 per patch dimension) and for fields that are constant across
/// each patch.
pub fn g_phi(
    loop_: &LoopPolyline,
    surface: &SurfacePatchGrid,
    clearance: f64,
) -> Result<Quantity, GeometryError> {
    let dim = flux_sensitivity_dim();
    let mut total = CompensatedSum::new();
    let mut err2 = CompensatedSum::new();
    for patch in surface.patches() {
        let b = biot_savart(loop_, patch.centroid, clearance)?;
        let f0 = vec3::norm2(b);
        total.add(f0 * patch.area_m2);

        // Refinement estimate: second differences of |B/I|^2 along the three
        // axes. Probe failures (stencil point inside the clearance zone) are
        // treated as "no estimate" for that axis rather than fatal, since the
        // main evaluation above already vetted the centroid itself.
        let h = patch.area_m2.sqrt() / 2.0;
        let mut lap = 0.0;
        for axis in 0..3 {
            let mut offset = [0.0; 3];
            offset[axis] = h;
            let plus = biot_savart(loop_, vec3::add(patch.centroid, offset), clearance);
            let minus = biot_savart(loop_, vec3::sub(patch.centroid, offset), clearance);
            if let (Ok(bp), Ok(bm)) = (plus, minus) {
                lap += (vec3::norm2(bp) + vec3::norm2(bm) - 2.0 * f0) / (h * h);
            }
        }
        let patch_err = patch.area_m2 * patch.area_m2 * lap.abs() / 24.0;
        err2.add(patch_err * patch_err);
    }
    Quantity::new(total.value(), err2.value().sqrt(), dim).map_err(GeometryError::from)
}

/// Dimension of the flux-sensitivity functional, T^2 A^-2 m^2.
pub fn flux_sensitivity_dim() -> Dim {
    // T = kg s^-2 A^-1, so T^2 A^-2 m^2 = kg^2 s^-4 A^-4 m^2.
    (Dim::MASS.powi(2) * Dim::LENGTH.powi(2))
        / (Dim::TIME.powi(4) * Dim::CURRENT.powi(4))
}

impl From<UnitsError> for GeometryError {
    fn from(e: UnitsError) -> Self {
        GeometryError::Units(e.to_string())
    }
}
