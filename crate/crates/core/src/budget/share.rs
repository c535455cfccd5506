//! Exact budget shares as rational fractions.
//!
//! Allocation shares are carried as `Ratio<i64>` so that the budget identity
//! `sum(allowances) + margin = gamma_total` holds exactly, with no floating
//! round-off. Shares parse from `p/q`, plain decimals, or percentages.

use num_rational::Ratio;

use super::BudgetError;

/// An exact allocation share in `[0, 1]`.
pub type Share = Ratio<i64>;

/// Parses a share from `p/q` (`2/5`), a decimal (`0.4`), or a percentage
/// (`40%`). The result is exact: decimals become `mantissa / 10^k`.
pub fn parse_share(text: &str) -> Result<Share, BudgetError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(BudgetError::InvalidShare {
            text: text.to_string(),
            reason: "empty".to_string(),
        });
    }
    let (body, percent) = match trimmed.strip_suffix('%') {
        Some(rest) => (rest.trim(), true),
        None => (trimmed, false),
    };
    let mut share = if let Some((num, den)) = body.split_once('/') {
        let p: i64 = num.trim().parse().map_err(|_| BudgetError::InvalidShare {
            text: text.to_string(),
            reason: format!("bad numerator `{}`", num.trim()),
        })?;
        let q: i64 = den.trim().parse().map_err(|_| BudgetError::InvalidShare {
            text: text.to_string(),
            reason: format!("bad denominator `{}`", den.trim()),
        })?;
        if q == 0 {
            return Err(BudgetError::InvalidShare {
                text: text.to_string(),
                reason: "zero denominator".to_string(),
            });
        }
        Ratio::new(p, q)
    } else {
        parse_decimal(body).ok_or_else(|| BudgetError::InvalidShare {
            text: text.to_string(),
            reason: "expected `p/q`, a decimal, or `n%`".to_string(),
        })?
    };
    if percent {
        share /= Ratio::from_integer(100);
    }
    Ok(share)
}

/// Parses a plain decimal (`0.4`, `12`, `-3.25`) into an exact rational.
fn parse_decimal(body: &str) -> Option<Share> {
    let (sign, digits) = match body.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, body),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut numer: i64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let mut denom: i64 = 1;
    for c in frac_part.chars() {
        numer = numer.checked_mul(10)?.checked_add(c.to_digit(10)? as i64)?;
        denom = denom.checked_mul(10)?;
    }
    Some(Ratio::new(sign * numer, denom))
}

/// Renders a share as exact `p/q` text (`2/5`, `1/1`, `0/1`).
pub fn format_share(share: Share) -> String {
    format!("{}/{}", share.numer(), share.denom())
}

/// Multiplies an f64 by an exact share, keeping the arithmetic exact whenever
/// the product and quotient are representable (integer budgets with small
/// denominators stay bit-exact).
pub fn apply_share(value: f64, share: Share) -> f64 {
    (value * *share.numer() as f64) / *share.denom() as f64
}
