//! Serializable scenario reports and their text/CSV/JSON renderings.
//!
//! Every report has the same top-level JSON shape:
//! `{"scenario", "inputs", "results", "version"}`. Maps keep insertion
//! order, so identical inputs give byte-identical output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::checks::{self, Check};
use crate::hom::{self, TwoParticleInput};
use crate::hvsearch::{self, Assignment, Feasibility, ModelKind, SolutionSet};
use crate::indist::Label;
use crate::qcore::{self, Axis, ContextTable, Position, Sign};
use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub inputs: Value,
    pub results: Value,
    pub version: String,
}

impl Report {
    fn new(scenario: &str, inputs: Value, results: Value) -> Self {
        Report {
            scenario: scenario.to_string(),
            inputs,
            results,
            version: VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A report plus its human-readable and tabular renderings.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    /// False when a reproduced claim failed to hold.
    pub passed: bool,
    text: String,
    csv: String,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => self.report.to_json(),
            Format::Csv => self.csv.clone(),
        }
    }
}

fn slot_key(axis: Axis, site: impl std::fmt::Display) -> String {
    format!("{}_{}", axis.symbol(), site)
}

fn sign_json(s: Sign) -> Value {
    json!(s.value())
}

fn label_values_json(v: hvsearch::LabelValues) -> Value {
    let mut m = Map::new();
    for l in Label::ALL {
        for axis in Axis::ALL {
            m.insert(slot_key(axis, l), sign_json(v.get(l, axis)));
        }
    }
    Value::Object(m)
}

/// Nested-map rendering: `"X_x"`-style keys, rows `"1".."n"`,
/// arrangements in one-line notation.
pub fn assignment_json(a: &Assignment, table: &ContextTable) -> Value {
    match a {
        Assignment::Noncontextual(v) => {
            let mut m = Map::new();
            for p in Position::ALL {
                for axis in Axis::ALL {
                    m.insert(slot_key(axis, p), sign_json(v.get(p, axis)));
                }
            }
            Value::Object(m)
        }
        Assignment::Contextual(v) => {
            let mut rows = Map::new();
            for (r, (ctx, vals)) in table.rows().iter().zip(&v.rows).enumerate() {
                let mut m = Map::new();
                for (slot, &val) in ctx.slots.iter().zip(vals) {
                    m.insert(slot.to_string(), sign_json(val));
                }
                rows.insert((r + 1).to_string(), Value::Object(m));
            }
            Value::Object(rows)
        }
        Assignment::Identity(ia) => {
            let mut arrangements = Map::new();
            for (r, arr) in ia.arrangements.iter().enumerate() {
                arrangements.insert((r + 1).to_string(), json!(arr.to_string()));
            }
            json!({
                "arrangements": arrangements,
                "values": label_values_json(ia.values),
            })
        }
        Assignment::Hybrid(h) => {
            let mut values = Map::new();
            for (r, v) in h.values.iter().enumerate() {
                values.insert((r + 1).to_string(), label_values_json(*v));
            }
            json!({
                "arrangement": h.arrangement.to_string(),
                "values": values,
            })
        }
    }
}

fn assignment_text(a: &Assignment, table: &ContextTable) -> String {
    fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(m) => {
                for (k, v) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    flatten(&key, v, out);
                }
            }
            Value::Number(n) if n.as_i64() == Some(1) => out.push(format!("{prefix}=+1")),
            Value::Number(n) => out.push(format!("{prefix}={n}")),
            Value::String(s) => out.push(format!("{prefix}={s}")),
            other => out.push(format!("{prefix}={other}")),
        }
    }
    let mut parts = Vec::new();
    flatten("", &assignment_json(a, table), &mut parts);
    parts.join(" ")
}

fn targets_json(table: &ContextTable) -> Value {
    Value::Array(table.targets().into_iter().map(sign_json).collect())
}

fn targets_text(table: &ContextTable) -> String {
    table
        .targets()
        .iter()
        .map(Sign::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses four comma-separated GHZ targets such as `+1,+1,+1,-1`.
pub fn parse_targets(s: &str) -> Result<[Sign; 4]> {
    let values: Vec<Sign> = s
        .split(',')
        .map(|t| {
            let v: i64 = t
                .trim()
                .trim_start_matches('+')
                .parse()
                .map_err(|_| Error::Parse(format!("bad target '{t}'")))?;
            Sign::from_value(v)
        })
        .collect::<Result<_>>()?;
    values
        .try_into()
        .map_err(|v: Vec<Sign>| Error::Parse(format!("expected 4 targets, got {}", v.len())))
}

pub fn ghz_table() -> Result<Outcome> {
    let table = qcore::ghz_truth_table()?;
    let mut text = String::from("row  context      measured          target\n");
    let mut csv = String::from("row,context,measured,target\n");
    let mut rows = Vec::new();
    for (r, row) in table.rows.iter().enumerate() {
        let slots: Vec<String> = row.context.slots.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(
            text,
            "{:<4} {:<12} {:+.12}  {}",
            r + 1,
            slots.join(" "),
            row.measured,
            row.context.target
        );
        let _ = writeln!(
            csv,
            "{},{},{:?},{}",
            r + 1,
            row.context.axes_name(),
            row.measured,
            row.context.target.value()
        );
        rows.push(json!({
            "row": r + 1,
            "context": row.context.axes_name(),
            "slots": slots,
            "measured": row.measured,
            "target": sign_json(row.context.target),
        }));
    }
    let report = Report::new(
        "ghz-table",
        json!({"state": "(|uuu> - |ddd>)/sqrt2"}),
        json!({ "rows": rows }),
    );
    Ok(Outcome {
        report,
        passed: true,
        text,
        csv,
    })
}

fn checks_text(checks: &[Check]) -> String {
    let mut text = String::new();
    for c in checks {
        let _ = writeln!(
            text,
            "[{}] {:<30} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    text
}

fn checks_csv(checks: &[Check]) -> String {
    let mut csv = String::from("check,passed,detail\n");
    for c in checks {
        let _ = writeln!(csv, "{},{},\"{}\"", c.name, c.passed, c.detail.replace('"', "'"));
    }
    csv
}

pub fn symm_check() -> Result<Outcome> {
    let checks = checks::symmetry_checks();
    let lifted = checks::lifted_expectations()?;
    let mut text = checks_text(&checks);
    text.push_str("\ncontext  qubit             symmetrized       target\n");
    let mut csv = checks_csv(&checks);
    csv.push_str("\ncontext,qubit,symmetrized,target\n");
    for l in &lifted {
        let _ = writeln!(text, "{:<8} {:+.12}  {:+.12}  {}", l.context, l.qubit, l.symmetrized, l.target);
        let _ = writeln!(csv, "{},{:?},{:?},{}", l.context, l.qubit, l.symmetrized, l.target.value());
    }
    let passed = checks::all_passed(&checks);
    let report = Report::new(
        "symm-check",
        json!({"particles": 3, "modes": ["x", "y", "z"], "attachment": "abc"}),
        json!({
            "checks": checks,
            "expectations": lifted,
            "passed": passed,
        }),
    );
    Ok(Outcome {
        report,
        passed,
        text,
        csv,
    })
}

pub fn solution_set_json(set: &SolutionSet, table: &ContextTable, max_list: Option<usize>) -> Value {
    let limit = max_list.unwrap_or(usize::MAX);
    let listed: Vec<Value> = set
        .solutions
        .iter()
        .take(limit)
        .map(|s| json!({"index": s.packed, "assignment": assignment_json(&s.assignment, table)}))
        .collect();
    json!({
        "model": set.model.name(),
        "count": set.count(),
        "space": set.space,
        "visited": set.visited,
        "listed": listed.len(),
        "solutions": listed,
    })
}

pub fn enumerate(model: ModelKind, table: &ContextTable, max_list: Option<usize>) -> Outcome {
    let set = hvsearch::enumerate(model, table);
    let mut results = solution_set_json(&set, table, max_list);
    let mut text = format!(
        "model    {}\ntargets  {}\nspace    {}\nvisited  {}\ncount    {}\n",
        model,
        targets_text(table),
        set.space,
        set.visited,
        set.count()
    );
    if model == ModelKind::Noncontextual {
        let gf2 = hvsearch::gf2_feasibility(table);
        let gf2_json = match &gf2 {
            Feasibility::Feasible { witness } => json!({
                "feasible": true,
                "witness": assignment_json(&Assignment::Noncontextual(*witness), table),
            }),
            Feasibility::Infeasible { certificate } => {
                let rows: Vec<usize> = certificate.iter().map(|r| r + 1).collect();
                let _ = writeln!(text, "gf2      infeasible, rows {rows:?} sum to 0 = 1");
                json!({"feasible": false, "certificate": rows})
            }
        };
        if gf2.is_feasible() {
            text.push_str("gf2      feasible\n");
        }
        results["gf2"] = gf2_json;
    }
    for s in set.solutions.iter().take(max_list.unwrap_or(usize::MAX)) {
        let _ = writeln!(text, "#{} {}", s.packed, assignment_text(&s.assignment, table));
    }
    let csv = format!(
        "model,targets,count,space\n{},{},{},{}\n",
        model,
        table.targets().iter().map(|t| t.value().to_string()).collect::<Vec<_>>().join(" "),
        set.count(),
        set.space
    );
    let report = Report::new(
        "enumerate",
        json!({
            "model": model.name(),
            "targets": targets_json(table),
            "max_list": max_list,
        }),
        results,
    );
    Outcome {
        report,
        passed: true,
        text,
        csv,
    }
}

pub fn hom(input: &TwoParticleInput) -> Result<Outcome> {
    let out = hom::outcome_distribution(input)?;
    let text = format!(
        "statistics   {}\nt            {}\nboth-left    {:.12}\nboth-right   {:.12}\ncoincidence  {:.12}\n",
        input.statistics, input.transmissivity, out.both_left, out.both_right, out.coincidence
    );
    let csv = format!(
        "statistics,t,both_left,both_right,coincidence\n{},{:?},{:?},{:?},{:?}\n",
        input.statistics, input.transmissivity, out.both_left, out.both_right, out.coincidence
    );
    let report = Report::new(
        "hom",
        json!({"statistics": input.statistics, "t": input.transmissivity}),
        json!(out),
    );
    Ok(Outcome {
        report,
        passed: true,
        text,
        csv,
    })
}

pub fn verify() -> Outcome {
    let checks = checks::reproduction_checks();
    let passed = checks::all_passed(&checks);
    let mut text = checks_text(&checks);
    let _ = writeln!(
        text,
        "{}/{} checks pass",
        checks.iter().filter(|c| c.passed).count(),
        checks.len()
    );
    let csv = checks_csv(&checks);
    let report = Report::new(
        "verify-paper",
        json!({}),
        json!({"checks": checks, "passed": passed}),
    );
    Outcome {
        report,
        passed,
        text,
        csv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::Statistics;
    use proptest::prelude::*;

    #[test]
    fn ghz_table_text_ends_with_targets() {
        let out = ghz_table().unwrap();
        let text = out.render(Format::Text);
        let ends: Vec<&str> = text
            .lines()
            .skip(1)
            .map(|l| l.split_whitespace().last().unwrap())
            .collect();
        assert_eq!(ends, ["+1", "+1", "+1", "-1"]);
    }

    #[test]
    fn enumerate_json_shape() {
        let out = enumerate(ModelKind::Noncontextual, &ContextTable::ghz(), None);
        let v: Value = serde_json::from_str(&out.render(Format::Json)).unwrap();
        assert_eq!(v["results"]["count"], 0);
        assert_eq!(v["results"]["space"], 64);
        assert_eq!(v["results"]["gf2"]["certificate"], json!([1, 2, 3, 4]));
        assert_eq!(v["version"], VERSION);
    }

    #[test]
    fn identity_example_json_keys() {
        let v = assignment_json(&checks::identity_example(), &ContextTable::ghz());
        assert_eq!(v["arrangements"]["1"], "bac");
        assert_eq!(v["arrangements"]["4"], "abc");
        assert_eq!(v["values"]["X_b"], -1);
        assert_eq!(v["values"]["Y_c"], 1);
        let c = assignment_json(&checks::contextual_example(), &ContextTable::ghz());
        assert_eq!(c["4"]["X_x"], -1);
        assert_eq!(c["1"]["X_x"], 1);
    }

    #[test]
    fn max_list_caps_listing_only() {
        let out = enumerate(ModelKind::Contextual, &ContextTable::ghz(), Some(3));
        assert_eq!(out.report.results["count"], 256);
        assert_eq!(out.report.results["listed"], 3);
        assert_eq!(out.report.results["solutions"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn target_parsing() {
        assert_eq!(
            parse_targets("+1,+1,+1,-1").unwrap(),
            [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus]
        );
        assert!(parse_targets("1,1,1").is_err());
        assert!(parse_targets("1,1,0,1").is_err());
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = enumerate(ModelKind::Hybrid, &ContextTable::ghz(), Some(5)).render(Format::Json);
        let b = enumerate(ModelKind::Hybrid, &ContextTable::ghz(), Some(5)).render(Format::Json);
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn json_round_trip(pattern in 0u8..16, model in 0usize..5, cap in 0usize..8, t in 0.0f64..=1.0) {
            let mut targets = [Sign::Plus; 4];
            for (k, s) in targets.iter_mut().enumerate() {
                *s = Sign::from_bit(pattern >> k & 1 == 1);
            }
            let table = ContextTable::ghz_with_targets(targets);
            let report = enumerate(ModelKind::ALL[model], &table, Some(cap)).report;
            prop_assert_eq!(Report::from_json(&report.to_json()).unwrap(), report);

            let hom_report = hom(&TwoParticleInput::new(Statistics::Boson, t).unwrap()).unwrap().report;
            prop_assert_eq!(Report::from_json(&hom_report.to_json()).unwrap(), hom_report);
        }
    }
}
