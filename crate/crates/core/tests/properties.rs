//! Engine invariants over randomly generated context tables.

use proptest::prelude::*;

use qident::hvsearch::{
    enumerate_contextual, enumerate_hybrid, enumerate_identity_contextual, enumerate_identity_fixed,
    enumerate_noncontextual, gf2_feasibility, Arrangement, Assignment, ContextualValues, Feasibility,
};
use qident::qcore::{Axis, ContextTable, MeasurementContext, Position, Sign, Slot};

fn arb_context() -> impl Strategy<Value = MeasurementContext> {
    (prop::array::uniform3(any::<bool>()), any::<bool>(), Just(Position::ALL).prop_shuffle()).prop_map(
        |(axes, minus, positions)| {
            let slots: [Slot; 3] = std::array::from_fn(|k| {
                Slot::new(positions[k], if axes[k] { Axis::Y } else { Axis::X })
            });
            MeasurementContext::new(slots, Sign::from_bit(minus)).unwrap()
        },
    )
}

fn arb_table(max_rows: usize) -> impl Strategy<Value = ContextTable> {
    prop::collection::vec(arb_context(), 0..=max_rows).prop_map(|rows| ContextTable::new(rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gf2_matches_enumeration(table in arb_table(6)) {
        let set = enumerate_noncontextual(&table);
        match gf2_feasibility(&table) {
            Feasibility::Feasible { witness } => {
                prop_assert!(set.contains(&Assignment::Noncontextual(witness)));
            }
            Feasibility::Infeasible { certificate } => {
                prop_assert!(set.is_empty());
                prop_assert!(!certificate.is_empty());
            }
        }
    }

    #[test]
    fn counts_and_soundness(table in arb_table(3)) {
        let rows = table.len() as u32;
        let nc = enumerate_noncontextual(&table);
        let ctx = enumerate_contextual(&table);
        let fixed = enumerate_identity_fixed(&table);
        let hybrid = enumerate_hybrid(&table);
        let ident = enumerate_identity_contextual(&table);

        for set in [&nc, &ctx, &fixed, &hybrid, &ident] {
            prop_assert_eq!(set.visited, set.space);
            prop_assert!(set.verify(&table).unwrap());
        }
        prop_assert_eq!(ctx.count() as u64, 4u64.pow(rows));
        prop_assert_eq!(hybrid.count() as u64, 6 * 4u64.pow(rows));
        prop_assert_eq!(fixed.count(), 6 * nc.count());

        for a in nc.assignments() {
            let &Assignment::Noncontextual(v) = a else { unreachable!() };
            let lifted = Assignment::Contextual(ContextualValues::from_noncontextual(v, &table));
            prop_assert!(ctx.contains(&lifted));
        }
        for a in fixed.assignments() {
            prop_assert!(ident.contains(a));
        }
    }

    #[test]
    fn identity_count_invariant_under_relabeling(table in arb_table(2), sigma in 0usize..6) {
        let set = enumerate_identity_contextual(&table);
        let sigma = Arrangement::ALL[sigma];
        for a in set.assignments() {
            let Assignment::Identity(ia) = a else { unreachable!() };
            prop_assert!(set.contains(&Assignment::Identity(ia.relabel(sigma))));
        }
    }
}
