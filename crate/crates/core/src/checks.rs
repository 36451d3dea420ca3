//! Named reproduction checks shared by the CLI and the browser demo.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::hom::{self, Statistics, TwoParticleInput};
use crate::hvsearch::{
    self, Arrangement, Assignment, ContextualValues, Feasibility, IdentityAssignment, LabelValues,
};
use crate::indist::{self, Label, PERMUTATIONS};
use crate::qcore::{self, Axis, ContextTable, Sign};
use crate::{Result, TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Every value +1, except `X_x` in the `XXX` row, which is −1.
pub fn contextual_example() -> Assignment {
    let mut rows = vec![[Sign::Plus; 3]; 4];
    rows[3][0] = Sign::Minus;
    Assignment::Contextual(ContextualValues { rows })
}

/// Labels `b a c` at `x y z` in the first row and `a b c` elsewhere, with
/// `X_b = Y_a = Y_b = −1` and `X_a = X_c = Y_c = +1`.
pub fn identity_example() -> Assignment {
    let values = LabelValues::default()
        .with(Label::B, Axis::X, Sign::Minus)
        .with(Label::A, Axis::Y, Sign::Minus)
        .with(Label::B, Axis::Y, Sign::Minus);
    let swapped = Arrangement::new([Label::B, Label::A, Label::C]).expect("valid arrangement");
    Assignment::Identity(IdentityAssignment {
        arrangements: vec![
            swapped,
            Arrangement::IDENTITY,
            Arrangement::IDENTITY,
            Arrangement::IDENTITY,
        ],
        values,
    })
}

/// One context evaluated both on the 8-dim qubit state and, through
/// symmetrized observables, on the 216-dim three-boson state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedExpectation {
    pub context: String,
    pub qubit: f64,
    pub symmetrized: f64,
    pub target: Sign,
}

pub fn lifted_expectations() -> Result<Vec<LiftedExpectation>> {
    let psi = indist::build_identity_state();
    let ghz = qcore::make_ghz();
    ContextTable::ghz()
        .rows()
        .iter()
        .map(|ctx| {
            Ok(LiftedExpectation {
                context: ctx.axes_name(),
                qubit: qcore::expectation(&ghz, &qcore::pauli_context_operator(ctx)?)?,
                symmetrized: indist::expectation(&psi, &indist::context_observable(ctx)?)?,
                target: ctx.target,
            })
        })
        .collect()
}

/// Invariants of the symmetrized three-boson construction.
pub fn symmetry_checks() -> Vec<Check> {
    let s = indist::symmetrizer();
    let psi = indist::build_identity_state();
    let mut out = Vec::new();

    let idempotent = s
        .compose(&s)
        .map(|s2| qcore::max_abs_diff(s2.matrix(), s.matrix()));
    out.push(Check::from_result(
        "symmetrizer-idempotent",
        idempotent.map(|d| (d < TOLERANCE, format!("max |S^2 - S| = {d:.3e}"))),
    ));

    let trace = s.matrix().diag().sum().re;
    out.push(Check::new(
        "symmetric-subspace-dimension",
        (trace - 56.0).abs() < TOLERANCE,
        format!("trace(S) = {trace}"),
    ));

    let worst = PERMUTATIONS
        .iter()
        .map(|&p| (1.0 - psi.permute(p).fidelity(&psi)).abs())
        .fold(0.0, f64::max);
    out.push(Check::new(
        "exchange-invariance",
        worst < TOLERANCE,
        format!("max |1 - fidelity| over 6 permutations = {worst:.3e}"),
    ));

    let mags = indist::permutation_term_amplitudes(&psi).map(|a| a.norm());
    let spread = mags.iter().cloned().fold(f64::MIN, f64::max) - mags.iter().cloned().fold(f64::MAX, f64::min);
    out.push(Check::new(
        "maximal-indefiniteness",
        spread < TOLERANCE && mags[0] > 0.0,
        format!("6 permutation terms with |amplitude| = {:.12}", mags[0]),
    ));

    out.push(Check::from_result(
        "symmetrized-expectations",
        lifted_expectations().map(|rows| {
            let ok = rows.iter().all(|r| {
                (r.qubit - r.symmetrized).abs() < TOLERANCE
                    && (r.symmetrized - f64::from(r.target.value())).abs() < TOLERANCE
            });
            let detail = rows
                .iter()
                .map(|r| format!("{}={:+.12}", r.context, r.symmetrized))
                .collect::<Vec<_>>()
                .join(" ");
            (ok, detail)
        }),
    ));

    out.push(Check::from_result(
        "fock-representation",
        indist::first_quantize(&indist::fock_build()).map(|f| {
            let fid = f.fidelity(&psi);
            ((fid - 1.0).abs() < TOLERANCE, format!("|<fock|first>| = {fid:.15}"))
        }),
    ));
    out
}

fn per_row_triples(target: Sign) -> u64 {
    let mut n = 0;
    for bits in 0u8..8 {
        let parity = bits.count_ones() % 2 == 1;
        n += u64::from(Sign::from_bit(parity) == target);
    }
    n
}

/// The full set of reproduced claims.
pub fn reproduction_checks() -> Vec<Check> {
    let ghz = ContextTable::ghz();
    let mut out = Vec::new();

    out.push(Check::from_result(
        "ghz-truth-table",
        qcore::ghz_truth_table().map(|t| {
            let values: Vec<String> = t.measured().iter().map(|v| format!("{v:+.12}")).collect();
            (true, values.join(" "))
        }),
    ));

    let nc = hvsearch::enumerate_noncontextual(&ghz);
    out.push(Check::new(
        "noncontextual-impossible",
        nc.is_empty() && nc.space == 64 && nc.visited == 64,
        format!("count {} over {} assignments", nc.count(), nc.space),
    ));

    let gf2 = hvsearch::gf2_feasibility(&ghz);
    let detail = match &gf2 {
        Feasibility::Feasible { .. } => "feasible".to_string(),
        Feasibility::Infeasible { certificate } => {
            let rows: Vec<String> = certificate.iter().map(|r| (r + 1).to_string()).collect();
            format!("infeasible; rows {} sum to 0 = 1", rows.join(","))
        }
    };
    out.push(Check::new(
        "gf2-certificate",
        gf2 == Feasibility::Infeasible {
            certificate: vec![0, 1, 2, 3],
        },
        detail,
    ));

    let agree = ContextTable::ghz_sign_patterns()
        .filter(|t| hvsearch::enumerate_noncontextual(t).is_empty() == !hvsearch::gf2_feasibility(t).is_feasible())
        .count();
    out.push(Check::new(
        "gf2-enumeration-agreement",
        agree == 16,
        format!("{agree}/16 sign patterns agree"),
    ));

    let example = contextual_example();
    let ctx = hvsearch::enumerate_contextual(&ghz);
    let oracle: u64 = ghz.targets().into_iter().map(per_row_triples).product();
    out.push(Check::from_result(
        "contextual-example",
        example.satisfies(&ghz).map(|ok| {
            (
                ok && ctx.contains(&example) && ctx.count() as u64 == oracle,
                format!("count {} (oracle {oracle}) over {}", ctx.count(), ctx.space),
            )
        }),
    ));

    let identity = identity_example();
    let ident = hvsearch::enumerate_identity_contextual(&ghz);
    out.push(Check::from_result(
        "identity-example",
        identity.predictions(&ghz).map(|p| {
            let rendered: Vec<String> = p.iter().map(Sign::to_string).collect();
            (
                p == ghz.targets() && ident.contains(&identity),
                format!(
                    "predictions {}; {} solutions over {}",
                    rendered.join(" "),
                    ident.count(),
                    ident.space
                ),
            )
        }),
    ));

    let fixed = hvsearch::enumerate_identity_fixed(&ghz);
    out.push(Check::new(
        "identity-fixed-impossible",
        fixed.is_empty() && fixed.visited == 384,
        format!("count {} over {}", fixed.count(), fixed.space),
    ));

    let sym = symmetry_checks();
    out.push(Check::new(
        "symmetrization",
        all_passed(&sym),
        format!(
            "{}/{} symmetry checks pass",
            sym.iter().filter(|c| c.passed).count(),
            sym.len()
        ),
    ));

    let hom_values: Result<Vec<f64>> = Statistics::ALL
        .iter()
        .map(|&st| hom::coincidence_probability(&TwoParticleInput::new(st, FRAC_1_SQRT_2)?))
        .collect();
    out.push(Check::from_result(
        "hom-balanced",
        hom_values.map(|v| {
            let ok = v[0].abs() < TOLERANCE && (v[1] - 1.0).abs() < TOLERANCE && (v[2] - 0.5).abs() < TOLERANCE;
            (ok, format!("boson {:.3e}, fermion {:.12}, distinguishable {:.12}", v[0], v[1], v[2]))
        }),
    ));

    let hybrid = hvsearch::enumerate_hybrid(&ghz);
    out.push(Check::new(
        "hybrid-no-contradiction",
        !hybrid.is_empty(),
        format!("count {} over {}", hybrid.count(), hybrid.space),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let checks = reproduction_checks();
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(checks.len(), 10);
    }

    #[test]
    fn per_row_oracle() {
        assert_eq!(per_row_triples(Sign::Plus), 4);
        assert_eq!(per_row_triples(Sign::Minus), 4);
    }
}
