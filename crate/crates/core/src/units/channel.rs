//! Loss-channel registry: identities, qualitative metadata, and the
//! dimensional closure chain `[C] [rho] [G] = [O]` for every channel.
//!
//! Channels:
//!
//! | id         | materials statistic rho      | coupling functional G        | observable O        |
//! |------------|------------------------------|------------------------------|---------------------|
//! | I-TLS      | edge curvature moment, 1/m^2 | edge participation area, m^2 | dielectric Q^-1     |
//! | II-Spin    | areal spin density, 1/m^2    | flux sensitivity, T^2A^-2m^2 | flux noise, Wb^2    |
//! | III-Seam   | seam resistivity, ohm m      | seam admittance, S/m         | seam Q^-1           |
//! | IVa-QPTrap | quasiparticle density, 1/m^3 | trap collection rate, m^3/s  | pair-breaking rate  |
//! | IVb-QPEnv  | quasiparticle density, 1/m^3 | trap collection rate, m^3/s  | pair-breaking rate  |
//! | V-Phonon   | spectral overlap, 1         | phonon weighting, 1          | phonon-limited Q^-1 |
//!
//! Channel IV is split into a trap-geometry part (a) and an environmental
//! part (b); both share one closure chain. The channel-II observable is
//! stored in Wb^2 internally; reporting in flux-quantum units divides by
//! Phi0^2 at display time.

use std::fmt;

use super::dim::Dim;
use super::parse::parse_unit;
use super::UnitsError;

/// The six registered channel identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelId {
    ITls,
    IiSpin,
    IiiSeam,
    IvaQpTrap,
    IvbQpEnv,
    VPhonon,
}

/// Coarse channel family; the budget tables work at this level, where the
/// IV(a)/IV(b) split collapses into a single quasiparticle row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelClass {
    I,
    II,
    III,
    IV,
    V,
}

/// Which coherence observable a channel primarily limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    /// Energy relaxation rate 1/T1.
    Relaxation,
    /// Pure dephasing rate 1/Tphi.
    Dephasing,
}

/// How safely the channel can be treated as Markovian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Markovianity {
    Often,
    No,
    Approximately,
    Unknown,
}

impl ChannelId {
    pub const ALL: [ChannelId; 6] = [
        ChannelId::ITls,
        ChannelId::IiSpin,
        ChannelId::IiiSeam,
        ChannelId::IvaQpTrap,
        ChannelId::IvbQpEnv,
        ChannelId::VPhonon,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ChannelId::ITls => "I-TLS",
            ChannelId::IiSpin => "II-Spin",
            ChannelId::IiiSeam => "III-Seam",
            ChannelId::IvaQpTrap => "IVa-QPTrap",
            ChannelId::IvbQpEnv => "IVb-QPEnv",
            ChannelId::VPhonon => "V-Phonon",
        }
    }

    pub fn class(&self) -> ChannelClass {
        match self {
            ChannelId::ITls => ChannelClass::I,
            ChannelId::IiSpin => ChannelClass::II,
            ChannelId::IiiSeam => ChannelClass::III,
            ChannelId::IvaQpTrap | ChannelId::IvbQpEnv => ChannelClass::IV,
            ChannelId::VPhonon => ChannelClass::V,
        }
    }

    /// Parse a channel name. Accepts full labels (`I-TLS`) and short forms
    /// (`I`, `IVa`). Plain `IV` is rejected as ambiguous between the trap
    /// and environmental sub-channels.
    pub fn parse(name: &str) -> Result<ChannelId, UnitsError> {
        match name.trim() {
            "I-TLS" | "I" => Ok(ChannelId::ITls),
            "II-Spin" | "II" => Ok(ChannelId::IiSpin),
            "III-Seam" | "III" => Ok(ChannelId::IiiSeam),
            "IVa-QPTrap" | "IVa" => Ok(ChannelId::IvaQpTrap),
            "IVb-QPEnv" | "IVb" => Ok(ChannelId::IvbQpEnv),
            "V-Phonon" | "V" => Ok(ChannelId::VPhonon),
            "IV" => Err(UnitsError::AmbiguousChannel { name: name.trim().to_string() }),
            other => Err(UnitsError::UnknownChannel { name: other.to_string() }),
        }
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl ChannelClass {
    pub const ALL: [ChannelClass; 5] =
        [ChannelClass::I, ChannelClass::II, ChannelClass::III, ChannelClass::IV, ChannelClass::V];

    pub fn label(&self) -> &'static str {
        match self {
            ChannelClass::I => "I",
            ChannelClass::II => "II",
            ChannelClass::III => "III",
            ChannelClass::IV => "IV",
            ChannelClass::V => "V",
        }
    }

    pub fn parse(name: &str) -> Result<ChannelClass, UnitsError> {
        match name.trim() {
            "I" => Ok(ChannelClass::I),
            "II" => Ok(ChannelClass::II),
            "III" => Ok(ChannelClass::III),
            "IV" => Ok(ChannelClass::IV),
            "V" => Ok(ChannelClass::V),
            other => Err(UnitsError::UnknownChannel { name: other.to_string() }),
        }
    }

    /// Representative channel id used when a class-level computation needs a
    /// closure chain (IV maps to the environmental sub-channel).
    pub fn representative(&self) -> ChannelId {
        match self {
            ChannelClass::I => ChannelId::ITls,
            ChannelClass::II => ChannelId::IiSpin,
            ChannelClass::III => ChannelId::IiiSeam,
            ChannelClass::IV => ChannelId::IvbQpEnv,
            ChannelClass::V => ChannelId::VPhonon,
        }
    }
}

impl fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Qualitative per-channel metadata.
#[derive(Debug, Clone, Copy)]
pub struct ChannelMeta {
    pub id: ChannelId,
    pub mechanism: &'static str,
    pub primary_observable: ObservableKind,
    pub secondary_observable: Option<ObservableKind>,
    pub markovian: Markovianity,
    pub caveat: &'static str,
}

pub fn channel_meta(id: ChannelId) -> ChannelMeta {
    match id {
        ChannelId::ITls => ChannelMeta {
            id,
            mechanism: "two-level-system dielectric loss at etched edges",
            primary_observable: ObservableKind::Relaxation,
            secondary_observable: Some(ObservableKind::Dephasing),
            markovian: Markovianity::Often,
            caveat: "Slow dielectric fluctuations.",
        },
        ChannelId::IiSpin => ChannelMeta {
            id,
            mechanism: "surface-spin flux noise",
            primary_observable: ObservableKind::Dephasing,
            secondary_observable: Some(ObservableKind::Relaxation),
            markovian: Markovianity::No,
            caveat: "Echo vs. Ramsey differ.",
        },
        ChannelId::IiiSeam => ChannelMeta {
            id,
            mechanism: "resistive loss at package seams",
            primary_observable: ObservableKind::Relaxation,
            secondary_observable: None,
            markovian: Markovianity::Often,
            caveat: "Primarily relaxation.",
        },
        ChannelId::IvaQpTrap => ChannelMeta {
            id,
            mechanism: "quasiparticle pair breaking, trap-geometry side",
            primary_observable: ObservableKind::Relaxation,
            secondary_observable: None,
            markovian: Markovianity::Approximately,
            caveat: "Parity dynamics; trap-geometry sub-prescriptor.",
        },
        ChannelId::IvbQpEnv => ChannelMeta {
            id,
            mechanism: "quasiparticle pair breaking, environmental side",
            primary_observable: ObservableKind::Relaxation,
            secondary_observable: None,
            markovian: Markovianity::Approximately,
            caveat: "Parity dynamics; environmental sub-prescriptor.",
        },
        ChannelId::VPhonon => ChannelMeta {
            id,
            mechanism: "phonon-mediated substrate loss",
            primary_observable: ObservableKind::Relaxation,
            secondary_observable: None,
            markovian: Markovianity::Unknown,
            caveat: "Hypothesis-level.",
        },
    }
}

/// One factor of a closure chain: the conventional spelling plus its parsed
/// dimension.
#[derive(Debug, Clone)]
pub struct DimFactor {
    pub spelling: &'static str,
    pub dim: Dim,
}

fn factor(spelling: &'static str) -> DimFactor {
    let dim = parse_unit(spelling)
        .unwrap_or_else(|e| panic!("registry spelling {spelling:?} must parse: {e}"))
        .dim;
    DimFactor { spelling, dim }
}

/// The registered dimension chain for one channel.
#[derive(Debug, Clone)]
pub struct ClosureSpec {
    pub channel: ChannelId,
    pub rho: DimFactor,
    pub g: DimFactor,
    pub c: DimFactor,
    pub o: DimFactor,
    /// Human note shown with the chain (e.g. the Wb^2 = Phi0^2 identity).
    pub note: &'static str,
}

impl ClosureSpec {
    /// Residual dimension `[C][rho][G] / [O]`; closure holds when this is 1.
    pub fn residual(&self) -> Dim {
        self.c.dim * self.rho.dim * self.g.dim / self.o.dim
    }

    pub fn passes(&self) -> bool {
        self.residual().is_none()
    }
}

/// Closure chain for a channel, with the conventional unit spellings.
pub fn closure_spec(channel: ChannelId) -> ClosureSpec {
    match channel {
        ChannelId::ITls => ClosureSpec {
            channel,
            rho: factor("1/m^2"),
            g: factor("m^2"),
            c: factor("1"),
            o: factor("1"),
            note: "O is the dielectric inverse quality factor",
        },
        ChannelId::IiSpin => ClosureSpec {
            channel,
            rho: factor("1/m^2"),
            g: factor("T^2 A^-2 m^2"),
            c: factor("J^2 T^-2"),
            o: factor("Wb^2"),
            note: "C is mu_B^2; J^2 A^-2 = Wb^2, reported in Phi0^2 units",
        },
        ChannelId::IiiSeam => ClosureSpec {
            channel,
            rho: factor("ohm m"),
            g: factor("S/m"),
            c: factor("1"),
            o: factor("1"),
            note: "O is the seam-limited inverse quality factor",
        },
        ChannelId::IvaQpTrap | ChannelId::IvbQpEnv => ClosureSpec {
            channel,
            rho: factor("1/m^3"),
            g: factor("m^3/s"),
            c: factor("1"),
            o: factor("1/s"),
            note: "G absorbs the trap collection prefactor",
        },
        ChannelId::VPhonon => ClosureSpec {
            channel,
            rho: factor("1"),
            g: factor("1"),
            c: factor("1"),
            o: factor("1"),
            note: "spectral-overlap ratio times dimensionless weighting",
        },
    }
}

/// Outcome of a closure check.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub channel: ChannelId,
    pub pass: bool,
    pub residual: Dim,
    /// Rendered chain, e.g. `[1] [1/m^2] [m^2] = [1]`.
    pub chain: String,
    pub note: &'static str,
}

/// Check the registered chain for a channel.
pub fn check_closure(channel: ChannelId) -> ClosureReport {
    check_closure_spec(&closure_spec(channel))
}

/// Check an explicit chain (used to probe perturbed registrations).
pub fn check_closure_spec(spec: &ClosureSpec) -> ClosureReport {
    let residual = spec.residual();
    ClosureReport {
        channel: spec.channel,
        pass: residual.is_none(),
        residual,
        chain: format!(
            "[{}] [{}] [{}] = [{}]",
            spec.c.spelling, spec.rho.spelling, spec.g.spelling, spec.o.spelling
        ),
        note: spec.note,
    }
}

/// Check a closure chain by channel name; unknown names are errors.
pub fn check_closure_by_name(name: &str) -> Result<ClosureReport, UnitsError> {
    Ok(check_closure(ChannelId::parse(name)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_registered_chains_close() {
        for id in ChannelId::ALL {
            let report = check_closure(id);
            assert!(report.pass, "channel {id} residual {}", report.residual);
            assert!(report.residual.is_none());
        }
    }

    #[test]
    fn perturbed_chains_fail() {
        for id in ChannelId::ALL {
            for base in 0..7 {
                for delta in [-1, 1] {
                    let mut spec = closure_spec(id);
                    spec.o.dim = spec.o.dim.with_offset(base, delta);
                    assert!(
                        !check_closure_spec(&spec).pass,
                        "channel {id} should fail with base {base} offset {delta}"
                    );
                }
            }
        }
    }

    #[test]
    fn spin_channel_carries_flux_quantum_squared() {
        // rho[m^-2] G[T^2A^-2m^2] C[J^2T^-2] lands on Wb^2.
        let spec = closure_spec(ChannelId::IiSpin);
        let product = spec.c.dim * spec.rho.dim * spec.g.dim;
        assert_eq!(product, parse_unit("Wb^2").unwrap().dim);
        assert_eq!(product, parse_unit("J^2/A^2").unwrap().dim);
    }

    #[test]
    fn channel_name_parsing() {
        assert_eq!(ChannelId::parse("I-TLS").unwrap(), ChannelId::ITls);
        assert_eq!(ChannelId::parse("IVa").unwrap(), ChannelId::IvaQpTrap);
        assert!(matches!(
            ChannelId::parse("IV"),
            Err(UnitsError::AmbiguousChannel { .. })
        ));
        assert!(matches!(
            ChannelId::parse("VI"),
            Err(UnitsError::UnknownChannel { .. })
        ));
    }

    #[test]
    fn metadata_matches_channel_table() {
        let spin = channel_meta(ChannelId::IiSpin);
        assert_eq!(spin.primary_observable, ObservableKind::Dephasing);
        assert_eq!(spin.markovian, Markovianity::No);
        assert_eq!(spin.caveat, "Echo vs. Ramsey differ.");
        let phonon = channel_meta(ChannelId::VPhonon);
        assert_eq!(phonon.markovian, Markovianity::Unknown);
        assert_eq!(phonon.caveat, "Hypothesis-level.");
        assert_eq!(channel_meta(ChannelId::ITls).markovian, Markovianity::Often);
        assert_eq!(
            channel_meta(ChannelId::IvaQpTrap).markovian,
            Markovianity::Approximately
        );
    }

    #[test]
    fn classes_collapse_the_qp_split() {
        assert_eq!(ChannelId::IvaQpTrap.class(), ChannelClass::IV);
        assert_eq!(ChannelId::IvbQpEnv.class(), ChannelClass::IV);
        assert_eq!(ChannelClass::ALL.len(), 5);
        for class in ChannelClass::ALL {
            assert_eq!(class.representative().class(), class);
        }
    }
}
