//! Shared flag-parsing helpers for dimensioned values.

use prescriptor_core::units::{parse_value_with_unit, Dim, Quantity};

use crate::error::CliError;

/// Parses a `<value><unit>` flag such as `1ms`, `4e-4 m`, or `6.28e9 1/s`
/// into an exact quantity, optionally enforcing a dimension.
pub fn quantity_flag(
    text: &str,
    expected: Option<(Dim, &str)>,
    flag: &str,
) -> Result<Quantity, CliError> {
    let (value, unit) = parse_value_with_unit(text)
        .map_err(|e| CliError::domain(format!("--{flag} `{text}`: {e}")))?;
    if let Some((dim, spelling)) = expected {
        if unit.dim != dim {
            return Err(CliError::domain(format!(
                "--{flag} `{text}`: expected a quantity in {spelling}, got dimension {}",
                unit.dim
            )));
        }
    }
    Quantity::new(value * unit.factor, 0.0, unit.dim)
        .map_err(|e| CliError::domain(format!("--{flag} `{text}`: {e}")))
}

/// Parses a length flag and returns metres.
pub fn length_flag(text: &str, flag: &str) -> Result<f64, CliError> {
    Ok(quantity_flag(text, Some((Dim::LENGTH, "metres")), flag)?.value())
}
