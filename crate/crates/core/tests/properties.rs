//! Property tests for the structural invariants: printer/parser round-trip,
//! capture-avoiding substitution, power stationarity, and the
//! satisfiable-implies-consistent direction on tableaux.

use std::sync::Arc;

use proptest::prelude::*;

use ulmt_core::algebra::{make_godel_chain, make_lukasiewicz_chain, make_truncated_group_chain};
use ulmt_core::semantics::SearchSpace;
use ulmt_core::syntax::{
    parse_formula, Connective, Formula, Quantifier, Signature, Term, TruthConst,
};
use ulmt_core::tableaux::{find_satisfying_model, is_consistent, Tableau};

fn test_signature() -> Signature {
    let mut sig = Signature::new();
    sig.add_predicate("P", 1).unwrap();
    sig.add_predicate("R", 2).unwrap();
    sig.add_predicate("p", 0).unwrap();
    sig.add_function("f", 1).unwrap();
    sig.add_function("c", 0).unwrap();
    sig
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::var("x")),
        Just(Term::var("y")),
        Just(Term::var("z")),
        Just(Term::constant("c")),
    ];
    leaf.prop_recursive(3, 8, 1, |inner| {
        inner.prop_map(|t| Term::app("f", vec![t]))
    })
}

fn arb_connective() -> impl Strategy<Value = Connective> {
    prop_oneof![
        Just(Connective::And),
        Just(Connective::Or),
        Just(Connective::Fusion),
        Just(Connective::Implies),
    ]
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Const(TruthConst::Zero)),
        Just(Formula::Const(TruthConst::One)),
        Just(Formula::Const(TruthConst::Bot)),
        Just(Formula::Const(TruthConst::Top)),
        Just(Formula::prop("p")),
        arb_term().prop_map(|t| Formula::atom("P", vec![t])),
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::atom("R", vec![a, b])),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            (arb_connective(), inner.clone(), inner.clone())
                .prop_map(|(c, l, r)| Formula::binary(c, l, r)),
            (
                prop_oneof![Just(Quantifier::Forall), Just(Quantifier::Exists)],
                prop_oneof![Just("x"), Just("y"), Just("z")],
                inner
            )
                .prop_map(|(q, v, body)| Formula::quant(q, v, body)),
        ]
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(f in arb_formula()) {
        let sig = test_signature();
        let printed = f.to_string();
        let reparsed = parse_formula(&printed, &sig).expect("printed formulas parse");
        prop_assert_eq!(reparsed, f);
    }

    #[test]
    fn substitution_eliminates_the_variable(f in arb_formula()) {
        let had_x = f.free_variables().contains("x");
        let g = f.substitute("x", &Term::constant("c"));
        let mut expected = f.free_variables();
        expected.remove("x");
        prop_assert_eq!(g.free_variables(), expected);
        // Connective count is untouched by substitution.
        prop_assert_eq!(g.depth(), f.depth());
        if !had_x {
            prop_assert_eq!(g, f);
        }
    }

    #[test]
    fn substitution_by_variable_avoids_capture(f in arb_formula()) {
        let g = f.substitute("x", &Term::var("y"));
        if f.free_variables().contains("x") {
            prop_assert!(g.free_variables().contains("y"));
        }
        prop_assert!(!g.free_variables().contains("x"));
    }

    #[test]
    fn power_is_monotone_and_stationary(a in 0usize..7, n in 0usize..10) {
        for chain in [
            make_lukasiewicz_chain(7).unwrap(),
            make_godel_chain(7).unwrap(),
            make_truncated_group_chain(3).unwrap(),
        ] {
            prop_assert!(chain.power(a, n + 1) <= chain.power(a, n));
            prop_assert_eq!(
                chain.power(a, chain.size()),
                chain.power(a, chain.size() + n)
            );
        }
    }
}

fn arb_prop_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Const(TruthConst::Zero)),
        Just(Formula::Const(TruthConst::One)),
        Just(Formula::prop("p")),
        Just(Formula::prop("q")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        (arb_connective(), inner.clone(), inner).prop_map(|(c, l, r)| Formula::binary(c, l, r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn satisfiable_tableaux_are_consistent(
        left in proptest::collection::vec(arb_prop_formula(), 0..3),
        right in proptest::collection::vec(arb_prop_formula(), 0..3),
    ) {
        let g3 = Arc::new(make_godel_chain(3).unwrap());
        let space = SearchSpace::new(vec![g3], 1, 100_000).unwrap();
        let tableau = Tableau::from_parts(left, right);
        if find_satisfying_model(&space, &tableau).unwrap().is_some() {
            prop_assert!(is_consistent(&space, &tableau).unwrap());
        }
    }
}
