//! Pinned physical constants (CODATA 2018 / exact 2019-SI values).
//!
//! Constants carry zero uncertainty by convention: their residual rounding
//! error is orders of magnitude below every experimental sigma handled here,
//! and an exact sigma keeps budget arithmetic reproducible.

use super::dim::Dim;
use super::parse::PHI0_WB;
use super::quantity::Quantity;

fn joule() -> Dim {
    Dim::MASS * Dim::LENGTH.powi(2) * Dim::TIME.powi(-2)
}

fn tesla() -> Dim {
    Dim::MASS * Dim::TIME.powi(-2) * Dim::CURRENT.recip()
}

/// Bohr magneton, J/T.
pub fn bohr_magneton() -> Quantity {
    Quantity::exact(9.274_010_078_3e-24, joule() / tesla())
}

/// Magnetic flux quantum h/2e, Wb.
pub fn flux_quantum() -> Quantity {
    Quantity::exact(PHI0_WB, tesla() * Dim::LENGTH.powi(2))
}

/// Vacuum permeability, T m / A (equivalently N/A^2).
pub fn vacuum_permeability() -> Quantity {
    Quantity::exact(1.256_637_062_12e-6, tesla() * Dim::LENGTH / Dim::CURRENT)
}

/// The channel-II conversion factor mu_B^2 / Phi0^2 that turns
/// spin-density times flux sensitivity into a flux-noise amplitude in
/// flux-quantum units.
pub fn spin_flux_conversion() -> Quantity {
    let mu_b2 = bohr_magneton().mul(&bohr_magneton());
    let phi0_2 = flux_quantum().mul(&flux_quantum());
    mu_b2.div(&phi0_2).expect("flux quantum is nonzero")
}
