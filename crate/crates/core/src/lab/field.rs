//! Simulation volumes and coupling-kernel fields for the separability lab.

use super::LabError;
use crate::numerics::CompensatedSum;

/// Axis-aligned simulation box `[0, lx] x [0, ly] x [0, lz]` (metres).
#[derive(Debug, Clone, Copy)]
pub struct BoxSpec {
    pub lx_m: f64,
    pub ly_m: f64,
    pub lz_m: f64,
}

impl BoxSpec {
    pub fn new(lx_m: f64, ly_m: f64, lz_m: f64) -> Result<Self, LabError> {
        for (name, l) in [("lx", lx_m), ("ly", ly_m), ("lz", lz_m)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(LabError::InvalidBox(format!(
                    "{name} must be finite and positive, got {l}"
                )));
            }
        }
        Ok(Self { lx_m, ly_m, lz_m })
    }

    pub fn cube(l_m: f64) -> Result<Self, LabError> {
        Self::new(l_m, l_m, l_m)
    }

    pub fn volume_m3(&self) -> f64 {
        self.lx_m * self.ly_m * self.lz_m
    }

    pub fn min_edge_m(&self) -> f64 {
        self.lx_m.min(self.ly_m).min(self.lz_m)
    }

    pub fn edges(&self) -> [f64; 3] {
        [self.lx_m, self.ly_m, self.lz_m]
    }

    /// Checks that `p` lies inside the box, with a relative slack per axis
    /// for round-off at the faces.
    pub fn contains(&self, p: [f64; 3]) -> bool {
        let edges = self.edges();
        (0..3).all(|i| {
            let slack = edges[i] * 1e-12;
            p[i] >= -slack && p[i] <= edges[i] + slack
        })
    }

    /// Distance from `p` to the nearest box face (non-negative inside).
    pub fn distance_to_face(&self, p: [f64; 3]) -> f64 {
        let edges = self.edges();
        (0..3)
            .map(|i| p[i].min(edges[i] - p[i]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A regular grid of kernel values, cell-centred, covering the whole box.
#[derive(Debug, Clone)]
pub struct KernelGrid {
    n: [usize; 3],
    /// Values in x-fastest order: index = (k * ny + j) * nx + i.
    values: Vec<f64>,
}

impl KernelGrid {
    pub fn new(n: [usize; 3], values: Vec<f64>) -> Result<Self, LabError> {
        let expect = n[0] * n[1] * n[2];
        if n.contains(&0) {
            return Err(LabError::InvalidKernel(
                "grid must have at least one cell per axis".to_string(),
            ));
        }
        if values.len() != expect {
            return Err(LabError::InvalidKernel(format!(
                "grid shape {n:?} needs {expect} values, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(LabError::InvalidKernel(format!(
                "grid contains a non-finite value {bad}"
            )));
        }
        Ok(Self { n, values })
    }

    fn value_at(&self, box_: &BoxSpec, p: [f64; 3]) -> f64 {
        // Cell-containing lookup; boundary points are clamped to the last
        // cell, which for in-box points equals nearest-centroid lookup.
        let edges = box_.edges();
        let mut idx = [0usize; 3];
        for i in 0..3 {
            let cell = (p[i] / edges[i] * self.n[i] as f64).floor();
            idx[i] = (cell.max(0.0) as usize).min(self.n[i] - 1);
        }
        self.values[(idx[2] * self.n[1] + idx[1]) * self.n[0] + idx[0]]
    }
}

/// A dimensionless coupling kernel K(r) over the simulation box.
///
/// The microscopic observable per unit channel constant is the golden-rule
/// sum `sum_i K(r_i)` over defect positions; the factorized observable is
/// `rho * integral K dV`. Separability is the question of how far apart
/// those two can drift.
#[derive(Debug, Clone)]
pub enum KernelField {
    /// K = k0 everywhere: the factorization is exact by construction.
    Uniform { k0: f64 },
    /// K = k0 * exp(-d/lambda) with d the distance to the nearest box face:
    /// couplings concentrate at surfaces, as for surface-dominated loss.
    EdgeExponential { k0: f64, lambda_m: f64 },
    /// Arbitrary tabulated kernel on a regular cell-centred grid.
    Grid(KernelGrid),
}

impl KernelField {
    pub fn uniform(k0: f64) -> Result<Self, LabError> {
        if !(k0.is_finite() && k0 >= 0.0) {
            return Err(LabError::InvalidKernel(format!(
                "k0 must be finite and non-negative, got {k0}"
            )));
        }
        Ok(KernelField::Uniform { k0 })
    }

    pub fn edge_exponential(k0: f64, lambda_m: f64) -> Result<Self, LabError> {
        if !(k0.is_finite() && k0 >= 0.0) {
            return Err(LabError::InvalidKernel(format!(
                "k0 must be finite and non-negative, got {k0}"
            )));
        }
        if !(lambda_m.is_finite() && lambda_m > 0.0) {
            return Err(LabError::InvalidKernel(format!(
                "lambda must be finite and positive, got {lambda_m}"
            )));
        }
        Ok(KernelField::EdgeExponential { k0, lambda_m })
    }

    /// Kernel value at a point inside the box.
    pub fn value_at(&self, box_: &BoxSpec, p: [f64; 3]) -> Result<f64, LabError> {
        if !box_.contains(p) {
            return Err(LabError::OutsideBox {
                point: p,
                edges: box_.edges(),
            });
        }
        Ok(match self {
            KernelField::Uniform { k0 } => *k0,
            KernelField::EdgeExponential { k0, lambda_m } => {
                k0 * (-box_.distance_to_face(p).max(0.0) / lambda_m).exp()
            }
            KernelField::Grid(grid) => grid.value_at(box_, p),
        })
    }

    /// Largest kernel value over the box (exact for uniform/edge kernels,
    /// tabulated maximum for grids).
    pub fn max_value(&self) -> f64 {
        match self {
            KernelField::Uniform { k0 } => *k0,
            KernelField::EdgeExponential { k0, .. } => *k0,
            KernelField::Grid(grid) => grid
                .values
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Midpoint-rule integral of the kernel over the box, `integral K dV` in m^3
/// (the kernel itself is dimensionless), on a `resolution^3` cell grid.
pub fn kernel_integral(
    kernel: &KernelField,
    box_: &BoxSpec,
    resolution: usize,
) -> Result<f64, LabError> {
    if resolution == 0 {
        return Err(LabError::InvalidConfig(
            "quadrature resolution must be at least 1".to_string(),
        ));
    }
    let n = resolution;
    let edges = box_.edges();
    let cell = [
        edges[0] / n as f64,
        edges[1] / n as f64,
        edges[2] / n as f64,
    ];
    let cell_vol = cell[0] * cell[1] * cell[2];
    let mut sum = CompensatedSum::new();
    for k in 0..n {
        let z = cell[2] * (k as f64 + 0.5);
        for j in 0..n {
            let y = cell[1] * (j as f64 + 0.5);
            for i in 0..n {
                let x = cell[0] * (i as f64 + 0.5);
                sum.add(kernel.value_at(box_, [x, y, z])? * cell_vol);
            }
        }
    }
    Ok(sum.value())
}

/// Volume average of the kernel over the box.
pub fn kernel_mean(
    kernel: &KernelField,
    box_: &BoxSpec,
    resolution: usize,
) -> Result<f64, LabError> {
    Ok(kernel_integral(kernel, box_, resolution)? / box_.volume_m3())
}

/// Test oracle: closed-form integral of the edge-exponential kernel over a
/// cube of side `l`. Decomposing the cube into the six face pyramids (where
/// the nearest-face distance is just the distance to that face) gives
///
/// ```text
/// I = 6 k0 * integral_0^{L/2} exp(-z/lambda) (L - 2z)^2 dz
///   = 3 k0 [ L^2/b - 2L/b^2 + (2/b^3)(1 - e^{-bL}) ],   b = 1/(2 lambda)
/// ```
#[cfg(test)]
pub(crate) fn exact_edge_cube_integral(k0: f64, lambda_m: f64, l_m: f64) -> f64 {
    let b = 1.0 / (2.0 * lambda_m);
    3.0 * k0
        * (l_m * l_m / b - 2.0 * l_m / (b * b)
            + (2.0 / (b * b * b)) * (1.0 - (-b * l_m).exp()))
}
