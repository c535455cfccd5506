//! Structured form of a minimum dataset: the three reporting categories
//! and their records.

use std::collections::BTreeMap;
use std::fmt;

use crate::units::{parse_unit, ChannelId, Quantity, UnitsError};

/// A numeric entry exactly as written: value and optional statistical
/// bound in the stated unit, plus the unit spelling. Keeping the raw form
/// lets the canonical serializer reproduce the author's unit choice.
#[derive(Debug, Clone, PartialEq)]
pub struct RawValue {
    pub value: f64,
    pub sigma: Option<f64>,
    pub unit: String,
}

impl RawValue {
    /// Converts to an SI quantity; an absent bound converts as zero sigma
    /// (its absence is still visible through `sigma.is_none()`).
    pub fn quantity(&self) -> Result<Quantity, UnitsError> {
        let unit = parse_unit(&self.unit)?;
        Quantity::new(
            self.value * unit.factor,
            self.sigma.unwrap_or(0.0) * unit.factor,
            unit.dim,
        )
    }

    pub fn has_sigma(&self) -> bool {
        self.sigma.is_some()
    }
}

/// Acquisition context of a device-level observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolContext {
    Ramsey,
    Echo,
    T1Window,
    ParityMonitor,
}

impl ProtocolContext {
    pub const ALL: [ProtocolContext; 4] = [
        ProtocolContext::Ramsey,
        ProtocolContext::Echo,
        ProtocolContext::T1Window,
        ProtocolContext::ParityMonitor,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ProtocolContext::Ramsey => "ramsey",
            ProtocolContext::Echo => "echo",
            ProtocolContext::T1Window => "t1-window",
            ProtocolContext::ParityMonitor => "parity-monitor",
        }
    }

    pub fn parse(text: &str) -> Option<ProtocolContext> {
        Self::ALL.iter().copied().find(|c| c.label() == text.trim())
    }
}

impl fmt::Display for ProtocolContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One materials-side statistic measured on witness samples.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVariableRecord {
    pub channel: ChannelId,
    pub statistic: String,
    pub raw: RawValue,
    pub quantity: Quantity,
    /// Measurement technique, e.g. `FIB-SEM`, `EPR`, `CPW`.
    pub method: Option<String>,
    /// Witness-sample provenance (lot, wafer, co-processing statement).
    pub witness: Option<String>,
    pub extra: BTreeMap<String, String>,
    pub line: usize,
}

/// One computed geometry coupling functional.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingRecord {
    pub channel: ChannelId,
    pub name: String,
    pub raw: RawValue,
    pub quantity: Quantity,
    /// Mode-volume definition used by the field solution.
    pub mode_volume: Option<String>,
    /// Boundary conditions of the field solution.
    pub boundary: Option<String>,
    /// Solver procedure, detailed enough for third-party reproduction.
    pub solver: Option<String>,
    pub extra: BTreeMap<String, String>,
    pub line: usize,
}

/// One device-level coherence observable.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableRecord {
    pub channel: ChannelId,
    pub observable: String,
    pub raw: RawValue,
    pub quantity: Quantity,
    pub context: ProtocolContext,
    /// Spectral convention for flux-noise reporting (e.g. `one-sided`).
    pub convention: Option<String>,
    /// Parity-stability statement for quasiparticle observables.
    pub parity: Option<String>,
    pub extra: BTreeMap<String, String>,
    pub line: usize,
}

/// A parsed minimum dataset: state variables, coupling functionals, and
/// observables, in document order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MdsDocument {
    pub state_variables: Vec<StateVariableRecord>,
    pub couplings: Vec<CouplingRecord>,
    pub observables: Vec<ObservableRecord>,
}

impl MdsDocument {
    /// Every channel mentioned anywhere in the document, sorted.
    pub fn channels(&self) -> Vec<ChannelId> {
        let mut set: Vec<ChannelId> = self
            .state_variables
            .iter()
            .map(|r| r.channel)
            .chain(self.couplings.iter().map(|r| r.channel))
            .chain(self.observables.iter().map(|r| r.channel))
            .collect();
        set.sort();
        set.dedup();
        set
    }
}

/// Compact channel prefix used in record keys (`I`, `IVa`, ...).
pub fn channel_key(channel: ChannelId) -> &'static str {
    match channel {
        ChannelId::ITls => "I",
        ChannelId::IiSpin => "II",
        ChannelId::IiiSeam => "III",
        ChannelId::IvaQpTrap => "IVa",
        ChannelId::IvbQpEnv => "IVb",
        ChannelId::VPhonon => "V",
    }
}

/// Stable ordering index for canonical serialization.
pub fn channel_order(channel: ChannelId) -> usize {
    ChannelId::ALL
        .iter()
        .position(|c| *c == channel)
        .expect("registered channel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_value_converts_units_and_tracks_bound_presence() {
        let raw = RawValue { value: 2.5, sigma: Some(0.1), unit: "1/um^2".to_string() };
        let q = raw.quantity().unwrap();
        approx::assert_relative_eq!(q.value(), 2.5e12, max_relative = 1e-12);
        approx::assert_relative_eq!(q.sigma(), 1e11, max_relative = 1e-12);
        assert!(raw.has_sigma());
        let bare = RawValue { value: 2.5, sigma: None, unit: "1".to_string() };
        assert!(!bare.has_sigma());
        assert_eq!(bare.quantity().unwrap().sigma(), 0.0);
    }

    #[test]
    fn protocol_context_round_trips_labels() {
        for context in ProtocolContext::ALL {
            assert_eq!(ProtocolContext::parse(context.label()), Some(context));
        }
        assert_eq!(ProtocolContext::parse("ramsey"), Some(ProtocolContext::Ramsey));
        assert_eq!(ProtocolContext::parse("spin-echo"), None);
    }

    #[test]
    fn channel_keys_are_unique_and_ordered() {
        let keys: Vec<&str> = ChannelId::ALL.iter().map(|c| channel_key(*c)).collect();
        assert_eq!(keys, ["I", "II", "III", "IVa", "IVb", "V"]);
        for (i, c) in ChannelId::ALL.iter().enumerate() {
            assert_eq!(channel_order(*c), i);
        }
    }
}
