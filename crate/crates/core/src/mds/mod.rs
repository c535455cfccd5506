//! Minimum-dataset support: the smallest self-contained record set a
//! materials-to-coherence claim must publish, with a total parser, graded
//! validation, and a canonical serializer.
//!
//! A dataset has three sections:
//!
//! * `[rho]` — microstructural state variables measured on witness
//!   samples (areal defect moments, spin densities, seam resistances,
//!   quasiparticle densities, phonon impedance mismatches);
//! * `[g]` — geometry coupling functionals from field solutions;
//! * `[o]` — device-level coherence observables with their acquisition
//!   context.
//!
//! Parsing ([`parse_mds`]) is total and reports every problem with line
//! and column. Validation ([`validate`]) grades a parsed dataset as
//! `Insufficient`, `Trend`, or `Quantitative` per channel and overall.
//! Serialization ([`serialize_mds`]) renders a canonical text form that
//! is a fixed point of parse-then-serialize.

mod document;
mod parse;
mod serialize;
mod validate;

pub use document::{
    channel_key, channel_order, CouplingRecord, MdsDocument, ObservableRecord,
    ProtocolContext, RawValue, StateVariableRecord,
};
pub use parse::{parse_mds, Issue, MdsParseOutcome};
pub use serialize::serialize_mds;
pub use validate::{
    validate, validate_text, validate_with_registry, Deficiency, Grade,
    StatisticRegistry, Strictness, ValidationReport,
};
