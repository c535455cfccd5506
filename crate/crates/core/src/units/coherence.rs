//! Coherence-time bookkeeping: combine relaxation and pure dephasing into a
//! total dephasing time via 1/T2 = 1/(2 T1) + 1/Tphi.

use super::dim::Dim;
use super::quantity::Quantity;
use super::UnitsError;

/// Total T2 from T1 and Tphi, with first-order sigma propagation.
///
/// Both inputs must be positive times.
pub fn t2_from_t1_tphi(t1: &Quantity, tphi: &Quantity) -> Result<Quantity, UnitsError> {
    for (name, q) in [("T1", t1), ("Tphi", tphi)] {
        if q.dim() != Dim::TIME {
            return Err(UnitsError::DimensionMismatch {
                left: q.dim().to_string(),
                right: Dim::TIME.to_string(),
                context: format!("{name} must be a time"),
            });
        }
        if q.value() <= 0.0 {
            return Err(UnitsError::Domain {
                message: format!("{name} must be positive, got {}", q.value()),
            });
        }
    }
    let relaxation_part = t1.scale(2.0).recip()?;
    let dephasing_part = tphi.recip()?;
    relaxation_part.add(&dephasing_part)?.recip()
}
