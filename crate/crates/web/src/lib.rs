//! Browser bindings for the `qident` toolkit.
//!
//! Every export returns plain strings or numeric arrays, so the same
//! functions are callable (and tested) natively.

use wasm_bindgen::prelude::*;

use qident::hom::{self, Statistics, TwoParticleInput};
use qident::hvsearch::{self, ModelKind};
use qident::qcore::ContextTable;
use qident::report::{self, Format};
use serde_json::json;

fn table_from(targets: &str) -> Result<ContextTable, String> {
    report::parse_targets(targets)
        .map(ContextTable::ghz_with_targets)
        .map_err(|e| e.to_string())
}

/// The GHZ truth table as a JSON report.
#[wasm_bindgen]
pub fn ghz_table_json() -> Result<String, String> {
    report::ghz_table()
        .map(|o| o.render(Format::Json))
        .map_err(|e| e.to_string())
}

/// Solution counts of every model family plus the GF(2) verdict for the
/// four GHZ contexts with the given comma-separated targets.
#[wasm_bindgen]
pub fn classify_json(targets: &str) -> Result<String, String> {
    let table = table_from(targets)?;
    let models: Vec<_> = ModelKind::ALL
        .iter()
        .map(|&m| {
            let set = hvsearch::enumerate(m, &table);
            json!({"model": m.name(), "count": set.count(), "space": set.space})
        })
        .collect();
    let gf2 = match hvsearch::gf2_feasibility(&table) {
        hvsearch::Feasibility::Feasible { .. } => json!({"feasible": true}),
        hvsearch::Feasibility::Infeasible { certificate } => json!({
            "feasible": false,
            "certificate": certificate.iter().map(|r| r + 1).collect::<Vec<_>>(),
        }),
    };
    Ok(json!({"targets": targets, "models": models, "gf2": gf2}).to_string())
}

/// Full enumeration report for one model, listing at most `max_list`
/// solutions.
#[wasm_bindgen]
pub fn enumerate_json(model: &str, targets: &str, max_list: usize) -> Result<String, String> {
    let model: ModelKind = model.parse().map_err(|e: qident::Error| e.to_string())?;
    let table = table_from(targets)?;
    Ok(report::enumerate(model, &table, Some(max_list)).render(Format::Json))
}

/// Coincidence probability at `samples` evenly spaced transmissivities
/// from 0 to 1.
#[wasm_bindgen]
pub fn hom_curve(statistics: &str, samples: usize) -> Result<Vec<f64>, String> {
    let st: Statistics = statistics.parse().map_err(|e: qident::Error| e.to_string())?;
    let n = samples.max(2);
    (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            let input = TwoParticleInput::new(st, t).map_err(|e| e.to_string())?;
            hom::coincidence_probability(&input).map_err(|e| e.to_string())
        })
        .collect()
}

/// `[both_left, both_right, coincidence]` at one transmissivity.
#[wasm_bindgen]
pub fn hom_outcomes(statistics: &str, t: f64) -> Result<Vec<f64>, String> {
    let st: Statistics = statistics.parse().map_err(|e: qident::Error| e.to_string())?;
    let input = TwoParticleInput::new(st, t).map_err(|e| e.to_string())?;
    let o = hom::outcome_distribution(&input).map_err(|e| e.to_string())?;
    Ok(vec![o.both_left, o.both_right, o.coincidence])
}

#[wasm_bindgen]
pub fn verify_text() -> String {
    report::verify().render(Format::Text)
}
