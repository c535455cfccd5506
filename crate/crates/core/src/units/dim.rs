//! SI dimension vectors with exact rational exponents.
//!
//! Closure checks have to distinguish "dimensionless" from "almost
//! dimensionless", so exponents are exact rationals rather than floats.

use std::fmt;
use std::ops::{Div, Mul};

use num_rational::Ratio;
use num_traits::Zero;

/// Exponent of one SI base dimension.
pub type Exp = Ratio<i32>;

const fn whole(n: i32) -> Exp {
    Ratio::new_raw(n, 1)
}

/// Order of base dimensions inside [`Dim`]: metre, kilogram, second, ampere,
/// kelvin, mole, candela.
pub const BASE_SYMBOLS: [&str; 7] = ["m", "kg", "s", "A", "K", "mol", "cd"];

/// A product of powers of the seven SI base dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dim {
    exps: [Exp; 7],
}

impl Dim {
    pub const NONE: Dim = Dim::base([0, 0, 0, 0, 0, 0, 0]);
    pub const LENGTH: Dim = Dim::base([1, 0, 0, 0, 0, 0, 0]);
    pub const MASS: Dim = Dim::base([0, 1, 0, 0, 0, 0, 0]);
    pub const TIME: Dim = Dim::base([0, 0, 1, 0, 0, 0, 0]);
    pub const CURRENT: Dim = Dim::base([0, 0, 0, 1, 0, 0, 0]);
    pub const TEMPERATURE: Dim = Dim::base([0, 0, 0, 0, 1, 0, 0]);
    pub const AMOUNT: Dim = Dim::base([0, 0, 0, 0, 0, 1, 0]);
    pub const LUMINOSITY: Dim = Dim::base([0, 0, 0, 0, 0, 0, 1]);

    const fn base(whole_exps: [i32; 7]) -> Dim {
        Dim {
            exps: [
                whole(whole_exps[0]),
                whole(whole_exps[1]),
                whole(whole_exps[2]),
                whole(whole_exps[3]),
                whole(whole_exps[4]),
                whole(whole_exps[5]),
                whole(whole_exps[6]),
            ],
        }
    }

    pub fn new(exps: [Exp; 7]) -> Dim {
        Dim { exps }
    }

    pub fn exponents(&self) -> &[Exp; 7] {
        &self.exps
    }

    pub fn is_none(&self) -> bool {
        self.exps.iter().all(|e| e.is_zero())
    }

    /// Raise to an integer power.
    pub fn powi(self, n: i32) -> Dim {
        self.pow_ratio(whole(n))
    }

    /// Raise to a rational power.
    pub fn pow_ratio(self, r: Exp) -> Dim {
        let mut exps = self.exps;
        for e in &mut exps {
            *e *= r;
        }
        Dim { exps }
    }

    pub fn recip(self) -> Dim {
        self.powi(-1)
    }

    /// Perturb one base exponent by a whole step; used to probe that closure
    /// checks actually fail off the registered chain.
    pub fn with_offset(mut self, base_index: usize, delta: i32) -> Dim {
        self.exps[base_index] += whole(delta);
        self
    }
}

impl Mul for Dim {
    type Output = Dim;

    // A product of dimensions adds exponents; clippy's arithmetic-impl
    // heuristic expects `*` on the fields and flags the `+`.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Dim) -> Dim {
        let mut exps = self.exps;
        for (e, r) in exps.iter_mut().zip(rhs.exps) {
            *e += r;
        }
        Dim { exps }
    }
}

impl Div for Dim {
    type Output = Dim;

    // A quotient of dimensions subtracts exponents, spelled here as
    // multiplication by the reciprocal.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Dim) -> Dim {
        self * rhs.recip()
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_none() {
            return write!(f, "1");
        }
        let mut first = true;
        for (symbol, exp) in BASE_SYMBOLS.iter().zip(&self.exps) {
            if exp.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if *exp == whole(1) {
                write!(f, "{symbol}")?;
            } else if exp.is_integer() {
                write!(f, "{symbol}^{}", exp.numer())?;
            } else {
                write!(f, "{symbol}^{}/{}", exp.numer(), exp.denom())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_identities() {
        let a = Dim::LENGTH.powi(2) * Dim::TIME.recip();
        assert_eq!(a * Dim::NONE, a);
        assert_eq!(a / a, Dim::NONE);
        assert_eq!(a.recip().recip(), a);
    }

    #[test]
    fn multiplication_commutes() {
        let a = Dim::LENGTH.powi(-2);
        let b = Dim::MASS * Dim::TIME.powi(-3);
        assert_eq!(a * b, b * a);
    }

    #[test]
    fn rational_exponents_compose_exactly() {
        let half = Dim::TIME.pow_ratio(Ratio::new(-1, 2));
        assert_eq!(half * half, Dim::TIME.recip());
        assert_eq!(half.powi(2), Dim::TIME.recip());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Dim::NONE.to_string(), "1");
        assert_eq!(Dim::LENGTH.powi(-2).to_string(), "m^-2");
        let energy = Dim::MASS * Dim::LENGTH.powi(2) * Dim::TIME.powi(-2);
        assert_eq!(energy.to_string(), "m^2 kg s^-2");
        assert_eq!(Dim::TIME.pow_ratio(Ratio::new(-1, 2)).to_string(), "s^-1/2");
    }

    #[test]
    fn offset_probe_changes_dimension() {
        let d = Dim::LENGTH;
        assert_ne!(d.with_offset(0, 1), d);
        assert_eq!(d.with_offset(0, 1).with_offset(0, -1), d);
    }
}
