//! Parser for unit strings such as `1/m^2`, `T^2 A^-2 m^2`, `ohm m`, `S/m`,
//! `us`, or `Phi0^2`.
//!
//! Grammar, informally:
//!
//! ```text
//! unit    := term (sep term)*
//! sep     := whitespace | '*' | '·' | '/'        ('/' inverts what follows)
//! term    := symbol ('^' exponent)?
//! exponent:= ['+'|'-'] digits ('/' digits)?      (rational exponents)
//! ```
//!
//! A `/` directly after a numeric exponent binds to the exponent when digits
//! follow (`s^-1/2` is s to the minus one half); otherwise it acts as a
//! divider (`m^2/s` is square metres per second). Symbols are resolved
//! against a fixed table of SI base and derived units, with standard decimal
//! prefixes tried only when the exact symbol is unknown (`mT` is millitesla,
//! `T` alone is tesla). The magnetic flux quantum `Phi0` is available as a
//! display unit for flux-noise amplitudes.

use super::dim::{Dim, Exp};
use super::UnitsError;
use num_rational::Ratio;

/// A parsed unit: a scale factor relative to coherent SI and a dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitExpr {
    pub factor: f64,
    pub dim: Dim,
}

impl UnitExpr {
    pub const ONE: UnitExpr = UnitExpr { factor: 1.0, dim: Dim::NONE };
}

/// Magnetic flux quantum h/2e in webers (2018 SI exact constants, rounded at
/// display precision).
pub const PHI0_WB: f64 = 2.067833848e-15;

fn joule() -> Dim {
    Dim::MASS * Dim::LENGTH.powi(2) * Dim::TIME.powi(-2)
}

fn lookup_symbol(symbol: &str) -> Option<(f64, Dim)> {
    let j = joule();
    let volt = j / (Dim::CURRENT * Dim::TIME);
    let weber = volt * Dim::TIME;
    Some(match symbol {
        "1" => (1.0, Dim::NONE),
        "m" => (1.0, Dim::LENGTH),
        "kg" => (1.0, Dim::MASS),
        "g" => (1e-3, Dim::MASS),
        "s" => (1.0, Dim::TIME),
        "A" => (1.0, Dim::CURRENT),
        "K" => (1.0, Dim::TEMPERATURE),
        "mol" => (1.0, Dim::AMOUNT),
        "cd" => (1.0, Dim::LUMINOSITY),
        "rad" | "sr" => (1.0, Dim::NONE),
        "Hz" => (1.0, Dim::TIME.recip()),
        "N" => (1.0, Dim::MASS * Dim::LENGTH * Dim::TIME.powi(-2)),
        "Pa" => (1.0, Dim::MASS * Dim::LENGTH.recip() * Dim::TIME.powi(-2)),
        "J" => (1.0, j),
        "W" => (1.0, j * Dim::TIME.recip()),
        "C" => (1.0, Dim::CURRENT * Dim::TIME),
        "V" => (1.0, volt),
        "F" => (1.0, Dim::CURRENT * Dim::TIME / volt),
        "ohm" | "Ohm" | "Ω" => (1.0, volt / Dim::CURRENT),
        "S" => (1.0, Dim::CURRENT / volt),
        "Wb" => (1.0, weber),
        "T" => (1.0, weber / Dim::LENGTH.powi(2)),
        "H" => (1.0, weber / Dim::CURRENT),
        "Phi0" => (PHI0_WB, weber),
        _ => return None,
    })
}

fn lookup_prefix(prefix: &str) -> Option<f64> {
    Some(match prefix {
        "y" => 1e-24,
        "z" => 1e-21,
        "a" => 1e-18,
        "f" => 1e-15,
        "p" => 1e-12,
        "n" => 1e-9,
        "u" | "µ" => 1e-6,
        "m" => 1e-3,
        "c" => 1e-2,
        "d" => 1e-1,
        "da" => 1e1,
        "h" => 1e2,
        "k" => 1e3,
        "M" => 1e6,
        "G" => 1e9,
        "T" => 1e12,
        "P" => 1e15,
        "E" => 1e18,
        "Z" => 1e21,
        "Y" => 1e24,
        _ => return None,
    })
}

fn resolve_symbol(symbol: &str) -> Option<(f64, Dim)> {
    if let Some(hit) = lookup_symbol(symbol) {
        return Some(hit);
    }
    // Exact symbols take precedence; only then try prefix splits, longest
    // prefix first so "da" wins over "d".
    let chars: Vec<char> = symbol.chars().collect();
    for take in (1..=2.min(chars.len().saturating_sub(1))).rev() {
        let prefix: String = chars[..take].iter().collect();
        let rest: String = chars[take..].iter().collect();
        if let (Some(scale), Some((factor, dim))) = (lookup_prefix(&prefix), lookup_symbol(&rest)) {
            return Some((scale * factor, dim));
        }
    }
    None
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str) -> Self {
        Scanner { chars: s.chars().peekable() }
    }

    fn skip_separators(&mut self) -> bool {
        // Returns true if a divider slash was consumed.
        let mut divided = false;
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() || c == '*' || c == '·' || c == '.' {
                self.chars.next();
            } else if c == '/' {
                self.chars.next();
                divided = true;
            } else {
                break;
            }
        }
        divided
    }

    fn symbol(&mut self) -> String {
        let mut out = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_alphanumeric() || c == 'Ω' || c == 'µ' {
                out.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        out
    }

    fn digits(&mut self) -> String {
        let mut out = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                out.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        out
    }

    /// Parse the exponent after `^`. A following `/digits` is the rational
    /// denominator; a `/` followed by anything else is left for the caller.
    fn exponent(&mut self, unit: &str) -> Result<Exp, UnitsError> {
        let mut sign = 1i32;
        if let Some(&c) = self.chars.peek() {
            if c == '+' || c == '-' {
                self.chars.next();
                if c == '-' {
                    sign = -1;
                }
            }
        }
        let numer = self.digits();
        if numer.is_empty() {
            return Err(UnitsError::BadExponent { unit: unit.to_string() });
        }
        let numer: i32 = numer
            .parse()
            .map_err(|_| UnitsError::BadExponent { unit: unit.to_string() })?;
        let mut denom = 1i32;
        // Clone-ahead: only consume '/' when digits follow.
        let mut lookahead = self.chars.clone();
        if lookahead.next() == Some('/') {
            if let Some(c) = lookahead.peek() {
                if c.is_ascii_digit() {
                    self.chars.next();
                    let d = self.digits();
                    denom = d
                        .parse()
                        .map_err(|_| UnitsError::BadExponent { unit: unit.to_string() })?;
                    if denom == 0 {
                        return Err(UnitsError::BadExponent { unit: unit.to_string() });
                    }
                }
            }
        }
        Ok(Ratio::new(sign * numer, denom))
    }

    fn at_end(&mut self) -> bool {
        self.chars.peek().is_none()
    }
}

/// Parse a unit string into scale factor and dimension.
pub fn parse_unit(input: &str) -> Result<UnitExpr, UnitsError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(UnitsError::EmptyUnit);
    }
    let mut scanner = Scanner::new(trimmed);
    let mut factor = 1.0f64;
    let mut dim = Dim::NONE;
    let mut inverted = false;
    let mut saw_term = false;
    loop {
        if scanner.skip_separators() {
            inverted = true;
        }
        if scanner.at_end() {
            break;
        }
        let symbol = scanner.symbol();
        if symbol.is_empty() {
            return Err(UnitsError::UnknownUnit { token: input.trim().to_string() });
        }
        let (base_factor, base_dim) = resolve_symbol(&symbol)
            .ok_or_else(|| UnitsError::UnknownUnit { token: symbol.clone() })?;
        let mut exp: Exp = Ratio::new(1, 1);
        if scanner.chars.peek() == Some(&'^') {
            scanner.chars.next();
            exp = scanner.exponent(input)?;
        }
        if inverted {
            exp = -exp;
        }
        let exp_f = *exp.numer() as f64 / *exp.denom() as f64;
        factor *= if exp.is_integer() {
            base_factor.powi(*exp.numer())
        } else {
            base_factor.powf(exp_f)
        };
        dim = dim * base_dim.pow_ratio(exp);
        saw_term = true;
    }
    if !saw_term {
        return Err(UnitsError::EmptyUnit);
    }
    Ok(UnitExpr { factor, dim })
}

/// Parse a scalar with an optional trailing unit, such as `1ms`, `6.28e9 1/s`
/// or `0.95`. A bare number is dimensionless with factor 1.
pub fn parse_value_with_unit(input: &str) -> Result<(f64, UnitExpr), UnitsError> {
    let trimmed = input.trim();
    let bytes = trimmed.as_bytes();
    let mut end = 0;
    while end < bytes.len() {
        let c = bytes[end] as char;
        let prev = if end > 0 { Some(bytes[end - 1] as char) } else { None };
        let is_sign_position = end == 0 || prev == Some('e') || prev == Some('E');
        if c.is_ascii_digit() || c == '.' || ((c == '+' || c == '-') && is_sign_position) {
            end += 1;
        } else if c == 'e' || c == 'E' {
            // Only an exponent marker when digits (or sign + digits) follow;
            // otherwise it starts the unit (e.g. the "e" is part of a symbol).
            let next = bytes.get(end + 1).map(|&b| b as char);
            let next2 = bytes.get(end + 2).map(|&b| b as char);
            let is_exp = match next {
                Some(d) if d.is_ascii_digit() => true,
                Some('+') | Some('-') => matches!(next2, Some(d) if d.is_ascii_digit()),
                _ => false,
            };
            if !is_exp {
                break;
            }
            end += 1;
        } else {
            break;
        }
    }
    let (num_part, unit_part) = trimmed.split_at(end);
    let value: f64 = num_part
        .trim()
        .parse()
        .map_err(|_| UnitsError::BadNumber { token: trimmed.to_string() })?;
    let unit_part = unit_part.trim();
    let unit = if unit_part.is_empty() { UnitExpr::ONE } else { parse_unit(unit_part)? };
    Ok((value, unit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn base_and_derived_units() {
        assert_eq!(parse_unit("m").unwrap().dim, Dim::LENGTH);
        assert_eq!(parse_unit("1").unwrap(), UnitExpr::ONE);
        let j = parse_unit("J").unwrap();
        assert_eq!(j.dim, Dim::MASS * Dim::LENGTH.powi(2) * Dim::TIME.powi(-2));
        assert_eq!(parse_unit("S/m").unwrap().dim, parse_unit("1/ohm/m").unwrap().dim);
    }

    #[test]
    fn flux_sensitivity_unit() {
        let g = parse_unit("T^2 A^-2 m^2").unwrap();
        let t = parse_unit("T").unwrap().dim;
        assert_eq!(g.dim, t.powi(2) * Dim::CURRENT.powi(-2) * Dim::LENGTH.powi(2));
        assert_relative_eq!(g.factor, 1.0);
    }

    #[test]
    fn seam_units_close() {
        let rho = parse_unit("ohm m").unwrap();
        let y = parse_unit("S/m").unwrap();
        assert!((rho.dim * y.dim).is_none());
        let rho2 = parse_unit("Ω·m").unwrap();
        assert_eq!(rho.dim, rho2.dim);
    }

    #[test]
    fn inverse_area() {
        assert_eq!(parse_unit("1/m^2").unwrap().dim, Dim::LENGTH.powi(-2));
        assert_eq!(parse_unit("m^-2").unwrap().dim, Dim::LENGTH.powi(-2));
    }

    #[test]
    fn prefixes_scale() {
        assert_relative_eq!(parse_unit("ms").unwrap().factor, 1e-3);
        assert_relative_eq!(parse_unit("us").unwrap().factor, 1e-6);
        assert_relative_eq!(parse_unit("µs").unwrap().factor, 1e-6);
        assert_relative_eq!(parse_unit("nm").unwrap().factor, 1e-9);
        assert_relative_eq!(parse_unit("GHz").unwrap().factor, 1e9);
        assert_eq!(parse_unit("GHz").unwrap().dim, Dim::TIME.recip());
        // Exact symbols beat prefix splits: T is tesla, not tera.
        assert_eq!(parse_unit("T").unwrap().dim, parse_unit("Wb/m^2").unwrap().dim);
        assert_relative_eq!(parse_unit("mT").unwrap().factor, 1e-3);
    }

    #[test]
    fn rational_exponent_vs_divider() {
        let half = parse_unit("s^-1/2").unwrap();
        assert_eq!(half.dim, Dim::TIME.pow_ratio(num_rational::Ratio::new(-1, 2)));
        let rate = parse_unit("m^2/s").unwrap();
        assert_eq!(rate.dim, Dim::LENGTH.powi(2) * Dim::TIME.recip());
    }

    #[test]
    fn flux_quantum_display_unit() {
        let phi2 = parse_unit("Phi0^2").unwrap();
        assert_relative_eq!(phi2.factor, PHI0_WB * PHI0_WB);
        assert_eq!(phi2.dim, parse_unit("Wb^2").unwrap().dim);
    }

    #[test]
    fn unknown_symbol_is_error() {
        assert!(matches!(parse_unit("furlong"), Err(UnitsError::UnknownUnit { .. })));
        assert!(matches!(parse_unit(""), Err(UnitsError::EmptyUnit)));
    }

    #[test]
    fn value_with_unit() {
        let (v, u) = parse_value_with_unit("1ms").unwrap();
        assert_relative_eq!(v * u.factor, 1e-3);
        assert_eq!(u.dim, Dim::TIME);
        let (v, u) = parse_value_with_unit("6.28e9 1/s").unwrap();
        assert_relative_eq!(v, 6.28e9);
        assert_eq!(u.dim, Dim::TIME.recip());
        let (v, u) = parse_value_with_unit("0.95").unwrap();
        assert_relative_eq!(v, 0.95);
        assert_eq!(u, UnitExpr::ONE);
        let (v, u) = parse_value_with_unit("-3e-4 T").unwrap();
        assert_relative_eq!(v, -3e-4);
        assert_eq!(u.dim, parse_unit("T").unwrap().dim);
    }
}
