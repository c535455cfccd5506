//! Budget-spec text files, result CSV, and report rendering.
//!
//! A budget file is sectioned text:
//!
//! ```text
//! [budget]
//! t1_target = 1e-3 0e0 s
//! omega = 1e9 0e0 1/s
//!
//! [allocations]
//! I = 2/5
//! II = 1/5
//! III = 1/5
//! IV = 1/10
//! V = 1/10
//!
//! [couplings]
//! I.c = 1e-3 0e0 1
//! I.g = 2e-4 0e0 m^2
//! ```
//!
//! Quantity records are `<value> <sigma> <unit>`. Couplings use dotted
//! keys: `<channel>.c`, `<channel>.g`, and optionally
//! `<channel>.allowance` for an allowance stated directly in the channel's
//! observable units. Measured state variables for feasibility screening
//! live in a CSV with header `channel,value,sigma,unit`.

use std::collections::BTreeMap;
use std::path::Path;

use super::feasibility::FeasibilityReport;
use super::plan::{BudgetResult, BudgetSpec, ChannelCoupling};
use super::share::{format_share, parse_share};
use super::BudgetError;
use crate::textfmt::parse_sections;
use crate::units::{parse_unit, ChannelClass, Quantity};

pub const BUDGET_CSV_HEADER: [&str; 5] =
    ["channel", "allowance_per_s", "rho_limit", "limit_unit", "margin"];
pub const MEASURED_CSV_HEADER: [&str; 4] = ["channel", "value", "sigma", "unit"];

/// Partially assembled coupling record: `(c, g, observable allowance)`.
type CouplingSlots = (Option<Quantity>, Option<Quantity>, Option<Quantity>);

fn parse_quantity_value(raw: &str, context: &str) -> Result<Quantity, BudgetError> {
    let tokens: Vec<&str> = raw.split_whitespace().collect();
    if tokens.len() < 3 {
        return Err(BudgetError::Parse(format!(
            "{context}: expected `<value> <sigma> <unit>`, got `{raw}`"
        )));
    }
    let value: f64 = tokens[0].parse().map_err(|_| {
        BudgetError::Parse(format!("{context}: cannot parse value `{}`", tokens[0]))
    })?;
    let sigma: f64 = tokens[1].parse().map_err(|_| {
        BudgetError::Parse(format!("{context}: cannot parse sigma `{}`", tokens[1]))
    })?;
    let unit_str = tokens[2..].join(" ");
    let unit = parse_unit(&unit_str)
        .map_err(|e| BudgetError::Parse(format!("{context}: bad unit `{unit_str}`: {e}")))?;
    Quantity::new(value * unit.factor, sigma * unit.factor, unit.dim)
        .map_err(|e| BudgetError::Parse(format!("{context}: {e}")))
}

/// Parses a budget spec from sectioned text. The returned spec has been
/// validated.
pub fn parse_budget_text(text: &str) -> Result<BudgetSpec, BudgetError> {
    let parsed = parse_sections(text);
    if !parsed.is_clean() {
        let mut msgs: Vec<String> = parsed.errors.iter().map(|e| e.to_string()).collect();
        msgs.sort();
        return Err(BudgetError::Parse(format!(
            "budget file has {} syntax error(s): {}",
            parsed.errors.len(),
            msgs.join("; ")
        )));
    }
    let budget_sec = parsed
        .section("budget")
        .ok_or_else(|| BudgetError::Parse("budget file: missing section [budget]".to_string()))?;
    let t1_raw = budget_sec
        .records
        .iter()
        .find(|r| r.key == "t1_target")
        .ok_or_else(|| {
            BudgetError::Parse("budget file: section [budget] is missing `t1_target`".to_string())
        })?;
    let t1_target = parse_quantity_value(&t1_raw.value, "[budget] t1_target")?;
    let omega = budget_sec
        .records
        .iter()
        .find(|r| r.key == "omega")
        .map(|r| parse_quantity_value(&r.value, "[budget] omega"))
        .transpose()?;

    let alloc_sec = parsed.section("allocations").ok_or_else(|| {
        BudgetError::Parse("budget file: missing section [allocations]".to_string())
    })?;
    let mut allocations = BTreeMap::new();
    for record in &alloc_sec.records {
        let class = ChannelClass::parse(&record.key).map_err(|e| {
            BudgetError::Parse(format!("[allocations] line {}: {e}", record.line))
        })?;
        let share = parse_share(&record.value)?;
        if allocations.insert(class, share).is_some() {
            return Err(BudgetError::Parse(format!(
                "[allocations] line {}: duplicate channel {class}",
                record.line
            )));
        }
    }

    let mut couplings: BTreeMap<ChannelClass, CouplingSlots> = BTreeMap::new();
    if let Some(coup_sec) = parsed.section("couplings") {
        for record in &coup_sec.records {
            let (class_name, field) = record.key.split_once('.').ok_or_else(|| {
                BudgetError::Parse(format!(
                    "[couplings] line {}: expected `<channel>.<c|g|allowance>`, got `{}`",
                    record.line, record.key
                ))
            })?;
            let class = ChannelClass::parse(class_name).map_err(|e| {
                BudgetError::Parse(format!("[couplings] line {}: {e}", record.line))
            })?;
            let q = parse_quantity_value(
                &record.value,
                &format!("[couplings] {}", record.key),
            )?;
            let entry = couplings.entry(class).or_default();
            let slot = match field {
                "c" => &mut entry.0,
                "g" => &mut entry.1,
                "allowance" => &mut entry.2,
                other => {
                    return Err(BudgetError::Parse(format!(
                        "[couplings] line {}: unknown field `{other}` \
                         (expected c, g, or allowance)",
                        record.line
                    )))
                }
            };
            if slot.replace(q).is_some() {
                return Err(BudgetError::Parse(format!(
                    "[couplings] line {}: duplicate `{}`",
                    record.line, record.key
                )));
            }
        }
    }
    let mut coupling_map = BTreeMap::new();
    for (class, (c, g, observable_allowance)) in couplings {
        let (Some(c), Some(g)) = (c, g) else {
            return Err(BudgetError::Parse(format!(
                "[couplings] channel {class}: both `.c` and `.g` are required"
            )));
        };
        coupling_map.insert(class, ChannelCoupling { c, g, observable_allowance });
    }

    let spec = BudgetSpec { t1_target, allocations, couplings: coupling_map, omega };
    spec.validate()?;
    Ok(spec)
}

/// Reads and parses a budget spec file.
pub fn parse_budget_path(path: impl AsRef<Path>) -> Result<BudgetSpec, BudgetError> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
        BudgetError::Parse(format!("cannot read `{}`: {e}", path.as_ref().display()))
    })?;
    parse_budget_text(&text)
}

fn quantity_record(q: &Quantity) -> String {
    format!("{:e} {:e} {}", q.value(), q.sigma(), q.dim())
}

/// Serializes a budget spec in the sectioned text format; parsing the
/// output reproduces the spec exactly.
pub fn write_budget_text(spec: &BudgetSpec) -> String {
    let mut out = String::new();
    out.push_str("[budget]\n");
    out.push_str(&format!("t1_target = {}\n", quantity_record(&spec.t1_target)));
    if let Some(omega) = &spec.omega {
        out.push_str(&format!("omega = {}\n", quantity_record(omega)));
    }
    out.push_str("\n[allocations]\n");
    for (class, share) in &spec.allocations {
        out.push_str(&format!("{class} = {}\n", format_share(*share)));
    }
    if !spec.couplings.is_empty() {
        out.push_str("\n[couplings]\n");
        for (class, coupling) in &spec.couplings {
            out.push_str(&format!("{class}.c = {}\n", quantity_record(&coupling.c)));
            out.push_str(&format!("{class}.g = {}\n", quantity_record(&coupling.g)));
            if let Some(oa) = &coupling.observable_allowance {
                out.push_str(&format!("{class}.allowance = {}\n", quantity_record(oa)));
            }
        }
    }
    out
}

/// Renders the planned budget as CSV with the pinned header. Channels
/// without a computed limit leave the limit cells empty; a positive
/// residual margin appends a final `margin` row.
pub fn write_budget_csv(result: &BudgetResult) -> String {
    let mut out = String::new();
    out.push_str(&BUDGET_CSV_HEADER.join(","));
    out.push('\n');
    out.push_str("# units: allowance_per_s=1/s rho_limit=see_limit_unit margin=1\n");
    for (class, allowance) in &result.allowances {
        let (limit, unit) = match result.rho_limits.get(class) {
            Some(q) => (format!("{:e}", q.value()), q.dim().to_string()),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{class},{:e},{limit},{unit},{}\n",
            allowance.value(),
            format_share(result.shares[class])
        ));
    }
    if result.margin_share > num_rational::Ratio::from_integer(0) {
        out.push_str(&format!(
            "margin,{:e},,,{}\n",
            result.margin_rate.value(),
            format_share(result.margin_share)
        ));
    }
    out
}

/// Reads measured state variables for feasibility screening from CSV with
/// header `channel,value,sigma,unit`. Each channel may appear once.
pub fn read_measured_csv(
    data: impl std::io::Read,
) -> Result<BTreeMap<ChannelClass, Quantity>, BudgetError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(data);
    let headers = reader
        .headers()
        .map_err(|e| BudgetError::Csv(format!("cannot read header: {e}")))?
        .clone();
    let expected: Vec<&str> = MEASURED_CSV_HEADER.to_vec();
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(BudgetError::Csv(format!(
            "expected header `{}`, got `{}`",
            expected.join(","),
            got.join(",")
        )));
    }
    let mut out = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| BudgetError::Csv(format!("line {line}: {e}")))?;
        if record.len() != 4 {
            return Err(BudgetError::Csv(format!(
                "line {line}: expected 4 fields, got {}",
                record.len()
            )));
        }
        let class = ChannelClass::parse(&record[0])
            .map_err(|e| BudgetError::Csv(format!("line {line}: {e}")))?;
        let value: f64 = record[1]
            .parse()
            .map_err(|_| BudgetError::Csv(format!("line {line}: bad value `{}`", &record[1])))?;
        let sigma: f64 = record[2]
            .parse()
            .map_err(|_| BudgetError::Csv(format!("line {line}: bad sigma `{}`", &record[2])))?;
        let unit = parse_unit(&record[3])
            .map_err(|e| BudgetError::Csv(format!("line {line}: bad unit `{}`: {e}", &record[3])))?;
        let q = Quantity::new(value * unit.factor, sigma * unit.factor, unit.dim)
            .map_err(|e| BudgetError::Csv(format!("line {line}: {e}")))?;
        if out.insert(class, q).is_some() {
            return Err(BudgetError::Csv(format!(
                "line {line}: duplicate channel {class}"
            )));
        }
    }
    Ok(out)
}

/// Reads a measured-state-variable CSV file.
pub fn read_measured_csv_path(
    path: impl AsRef<Path>,
) -> Result<BTreeMap<ChannelClass, Quantity>, BudgetError> {
    let file = std::fs::File::open(path.as_ref()).map_err(|e| {
        BudgetError::Csv(format!("cannot open `{}`: {e}", path.as_ref().display()))
    })?;
    read_measured_csv(file)
}

/// Renders the planned budget as a human-readable report.
pub fn render_plan_report(result: &BudgetResult) -> String {
    let mut out = String::new();
    out.push_str("coherence budget plan\n");
    out.push_str(&format!(
        "total loss rate: {:e} 1/s\n\n",
        result.gamma_total.value()
    ));
    for (class, allowance) in &result.allowances {
        let share = format_share(result.shares[class]);
        match result.rho_limits.get(class) {
            Some(limit) => out.push_str(&format!(
                "channel {class}: share {share}, allowance {:e} 1/s, \
                 state-variable limit {:e} {}\n",
                allowance.value(),
                limit.value(),
                limit.dim()
            )),
            None => {
                let reason = result
                    .skipped
                    .get(class)
                    .map(String::as_str)
                    .unwrap_or("no limit computed");
                out.push_str(&format!(
                    "channel {class}: share {share}, allowance {:e} 1/s, no limit ({reason})\n",
                    allowance.value()
                ));
            }
        }
    }
    if result.margin_share > num_rational::Ratio::from_integer(0) {
        out.push_str(&format!(
            "residual margin: share {}, {:e} 1/s\n",
            format_share(result.margin_share),
            result.margin_rate.value()
        ));
    }
    out
}

/// Renders a feasibility screening as a human-readable report.
pub fn render_feasibility_report(report: &FeasibilityReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "feasibility screening (confidence {}, one-sided k = {:.4})\n",
        report.confidence, report.k_sigma
    ));
    for ch in &report.channels {
        match (&ch.measured, ch.usage) {
            (Some(m), Some(usage)) => {
                out.push_str(&format!(
                    "channel {}: measured {:e} ± {:e} {}, limit {:e} {}, usage {:.1}% -> {}",
                    ch.class,
                    m.value(),
                    m.sigma(),
                    m.dim(),
                    ch.limit.value(),
                    ch.limit.dim(),
                    100.0 * usage,
                    ch.verdict
                ));
                if ch.diminishing_returns {
                    out.push_str(
                        "; far below limit, further reduction offers diminishing returns",
                    );
                }
                out.push('\n');
            }
            _ => out.push_str(&format!(
                "channel {}: no measurement, limit {:e} {} -> {}\n",
                ch.class,
                ch.limit.value(),
                ch.limit.dim(),
                ch.verdict
            )),
        }
    }
    if let Some(binding) = report.binding {
        out.push_str(&format!("binding channel: {binding}\n"));
    }
    out.push_str(&format!(
        "overall: {}\n",
        if report.go { "GO" } else { "NO-GO" }
    ));
    out
}
