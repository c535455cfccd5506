//! Canonical serialization of a minimum dataset.
//!
//! The canonical form is a fixed point of parse-then-serialize: sections
//! appear in the order `[rho]`, `[g]`, `[o]`; records are sorted by
//! (channel, name); numbers are written in exponent notation exactly as
//! parsed (Rust's `{:e}` is shortest round-trip), unit spellings are
//! preserved, and metadata appears in a fixed order — the well-known keys
//! of each section first, then any extras alphabetically.

use std::fmt::Write as _;

use super::document::{channel_key, channel_order, MdsDocument, RawValue};

fn push_value(out: &mut String, raw: &RawValue) {
    match raw.sigma {
        Some(sigma) => {
            let _ = write!(out, "{:e} {:e} {}", raw.value, sigma, raw.unit);
        }
        None => {
            let _ = write!(out, "{:e} {}", raw.value, raw.unit);
        }
    }
}

fn push_meta(out: &mut String, key: &str, value: &str) {
    let _ = write!(out, " | {key}={value}");
}

/// Renders the canonical text form of a document.
pub fn serialize_mds(doc: &MdsDocument) -> String {
    let mut out = String::new();

    out.push_str("[rho]\n");
    let mut rho: Vec<_> = doc.state_variables.iter().collect();
    rho.sort_by_key(|r| (channel_order(r.channel), r.statistic.clone()));
    for r in rho {
        let _ = write!(out, "{}.{} = ", channel_key(r.channel), r.statistic);
        push_value(&mut out, &r.raw);
        if let Some(v) = &r.method {
            push_meta(&mut out, "method", v);
        }
        if let Some(v) = &r.witness {
            push_meta(&mut out, "witness", v);
        }
        for (k, v) in &r.extra {
            push_meta(&mut out, k, v);
        }
        out.push('\n');
    }

    out.push_str("\n[g]\n");
    let mut g: Vec<_> = doc.couplings.iter().collect();
    g.sort_by_key(|r| (channel_order(r.channel), r.name.clone()));
    for r in g {
        let _ = write!(out, "{}.{} = ", channel_key(r.channel), r.name);
        push_value(&mut out, &r.raw);
        if let Some(v) = &r.mode_volume {
            push_meta(&mut out, "mode_volume", v);
        }
        if let Some(v) = &r.boundary {
            push_meta(&mut out, "boundary", v);
        }
        if let Some(v) = &r.solver {
            push_meta(&mut out, "solver", v);
        }
        for (k, v) in &r.extra {
            push_meta(&mut out, k, v);
        }
        out.push('\n');
    }

    out.push_str("\n[o]\n");
    let mut o: Vec<_> = doc.observables.iter().collect();
    o.sort_by_key(|r| (channel_order(r.channel), r.observable.clone()));
    for r in o {
        let _ = write!(out, "{}.{} = ", channel_key(r.channel), r.observable);
        push_value(&mut out, &r.raw);
        push_meta(&mut out, "context", r.context.label());
        if let Some(v) = &r.convention {
            push_meta(&mut out, "convention", v);
        }
        if let Some(v) = &r.parity {
            push_meta(&mut out, "parity", v);
        }
        for (k, v) in &r.extra {
            push_meta(&mut out, k, v);
        }
        out.push('\n');
    }

    out
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_mds;
    use super::*;

    #[test]
    fn serialization_is_a_fixed_point_of_parsing() {
        let messy = "\
# scrambled ordering, aliased channel names, extra whitespace
[o]
V.q_inv   =   3e-8   1e-9   1 | context=t1-window
I-TLS.q_inv = 4e-7 2e-8 1 | context=t1-window

[rho]
V.z_ph = 5 1
I.mu2 = 2.6 0.12 1/um^2 | witness=lot 7 | method=FIB-SEM

[g]
V.g_ph = 0.3 1
I.g_edge = 2e-4 1e-6 m^2
";
        let first = parse_mds(messy);
        assert!(first.is_clean(), "issues: {:?}", first.issues);
        let doc = first.document.unwrap();
        let canonical = serialize_mds(&doc);
        let expected = "\
[rho]
I.mu2 = 2.6e0 1.2e-1 1/um^2 | method=FIB-SEM | witness=lot 7
V.z_ph = 5e0 1

[g]
I.g_edge = 2e-4 1e-6 m^2
V.g_ph = 3e-1 1

[o]
I.q_inv = 4e-7 2e-8 1 | context=t1-window
V.q_inv = 3e-8 1e-9 1 | context=t1-window
";
        assert_eq!(canonical, expected);
        // Re-serializing the reparsed canonical text changes nothing.
        let second = parse_mds(&canonical);
        assert!(second.is_clean());
        assert_eq!(serialize_mds(&second.document.unwrap()), canonical);
    }

    #[test]
    fn metadata_order_is_canonicalized_with_extras_last() {
        let text = "\
[rho]
II.rho_spin = 4e17 2e16 1/m^2 | witness=chip 3 | vendor=acme | method=EPR

[g]
II.g_phi = 1.1e-12 T^2 A^-2 m^2 | solver=FEM | boundary=PEC | mode_volume=loop

[o]
II.flux_noise = 2e-12 1e-13 Wb^2 | convention=one-sided | context=echo
";
        let doc = parse_mds(text).document.expect("clean");
        let canonical = serialize_mds(&doc);
        assert!(canonical.contains(
            "II.rho_spin = 4e17 2e16 1/m^2 | method=EPR | witness=chip 3 | vendor=acme"
        ));
        assert!(canonical.contains(
            "II.g_phi = 1.1e-12 T^2 A^-2 m^2 | mode_volume=loop | boundary=PEC | solver=FEM"
        ));
        assert!(canonical
            .contains("II.flux_noise = 2e-12 1e-13 Wb^2 | context=echo | convention=one-sided"));
    }

    #[test]
    fn unit_spellings_and_bound_absence_survive_round_trips() {
        let text = "\
[rho]
III.r_seam = 3.2e-6 ohm m

[g]
III.y_seam = 8e-1 1e-2 S/m

[o]
III.q_inv = 2e-7 1e-8 1 | context=t1-window
";
        let doc = parse_mds(text).document.expect("clean");
        let canonical = serialize_mds(&doc);
        assert!(canonical.contains("III.r_seam = 3.2e-6 ohm m\n"));
        assert!(canonical.contains("III.y_seam = 8e-1 1e-2 S/m\n"));
        let reparsed = parse_mds(&canonical).document.expect("clean");
        assert_eq!(reparsed.state_variables[0].raw.sigma, None);
        assert_eq!(reparsed.state_variables[0].raw.unit, "ohm m");
    }
}
