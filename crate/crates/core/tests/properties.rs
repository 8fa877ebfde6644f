use std::collections::BTreeSet;

use deontix_core::embedding::{
    compile_problem, export_cnf, expand_deontic, import_cnf, nnf, skolemize, translate_sentence,
    ClauseSource, FoFormula, FoTerm, Modality, Var,
};
use deontix_core::logic::{
    parse_formula, parse_with_signature, DeonticOp, Formula, NamedFormula, Signature, Term,
    UniversalClosure,
};
use deontix_core::prover::{
    check_model, check_proof, find_countermodel, prove, ProverResult, ResourceLimits,
};
use proptest::prelude::*;

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::var("X")),
        Just(Term::var("Y")),
        Just(Term::constant("a")),
        Just(Term::constant("b")),
    ];
    leaf.prop_recursive(2, 4, 1, |inner| {
        inner.prop_map(|t| Term::App("f".into(), vec![t]))
    })
}

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        Just(Formula::prop("p")),
        Just(Formula::prop("q")),
        term().prop_map(|t| Formula::atom("r", vec![t])),
        (term(), term()).prop_map(|(s, t)| Formula::atom("s", vec![s, t])),
    ]
}

fn formula_over(leaf: BoxedStrategy<Formula>, modal: bool) -> impl Strategy<Value = Formula> {
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let boolean = prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
        ];
        if !modal {
            return boolean.boxed();
        }
        let op = prop_oneof![Just(DeonticOp::Ob), Just(DeonticOp::Pm), Just(DeonticOp::Fb)];
        prop_oneof![
            4 => boolean,
            1 => inner.clone().prop_map(Formula::id),
            1 => inner.clone().prop_map(Formula::ob),
            1 => inner.clone().prop_map(Formula::pm),
            1 => inner.clone().prop_map(Formula::fb),
            1 => (op, inner.clone(), inner.clone()).prop_map(|(o, l, r)| Formula::cond(o, l, r)),
        ]
        .boxed()
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    formula_over(atom().boxed(), true)
}

const PROPS: [&str; 4] = ["p", "q", "r", "s"];

fn propositional() -> impl Strategy<Value = Formula> {
    formula_over((0..4usize).prop_map(|i| Formula::prop(PROPS[i])).boxed(), false)
}

fn ground_modal() -> impl Strategy<Value = Formula> {
    formula_over((0..3usize).prop_map(|i| Formula::prop(PROPS[i])).boxed(), true)
}

fn truth(f: &Formula, v: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(a) => v(&a.predicate),
        Formula::Not(g) => !truth(g, v),
        Formula::And(l, r) => truth(l, v) && truth(r, v),
        Formula::Or(l, r) => truth(l, v) || truth(r, v),
        Formula::Implies(l, r) => !truth(l, v) || truth(r, v),
        _ => unreachable!("propositional only"),
    }
}

fn satisfiable_by_table(f: &Formula) -> bool {
    (0u32..16).any(|bits| truth(f, &|p| bits >> PROPS.iter().position(|x| *x == p).unwrap() & 1 == 1))
}

fn nf(name: &str, f: &Formula) -> NamedFormula {
    NamedFormula::new(name, f)
}

/// Universal variables enclosing each existential of an NNF formula, in the
/// order a left-to-right walk meets them.
fn expected_scopes(f: &FoFormula, scope: &mut Vec<Var>, out: &mut Vec<Vec<Var>>) {
    match f {
        FoFormula::Atom(_) => {}
        FoFormula::Not(g) => expected_scopes(g, scope, out),
        FoFormula::And(l, r) | FoFormula::Or(l, r) | FoFormula::Implies(l, r) => {
            expected_scopes(l, scope, out);
            expected_scopes(r, scope, out);
        }
        FoFormula::Forall(v, g) => {
            scope.push(v.clone());
            expected_scopes(g, scope, out);
            scope.pop();
        }
        FoFormula::Exists(_, g) => {
            out.push(scope.clone());
            expected_scopes(g, scope, out);
        }
    }
}

fn original_name(v: &Var) -> Var {
    let (base, _) = v.name.rsplit_once('_').expect("renamed universal");
    Var {
        name: base.to_owned(),
        sort: v.sort,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn tree_json_round_trip(f in formula()) {
        let json = serde_json::to_string(&f).unwrap();
        let back: Formula = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn closure_is_idempotent_and_closes(f in formula()) {
        let once = f.universal_closure();
        prop_assert_eq!(once.universal_closure(), once.clone());
        prop_assert!(once.free_variables().is_empty());
        prop_assert_eq!(once.variables, f.variables_in_order());
    }

    #[test]
    fn fb_is_ob_of_negation(f in formula()) {
        prop_assert_eq!(
            expand_deontic(&Formula::fb(f.clone())),
            expand_deontic(&Formula::ob(Formula::not(f)))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn accepted_theories_compile_without_arity_errors(fs in prop::collection::vec(formula(), 1..4)) {
        let mut sig = Signature::default();
        for f in &fs {
            let parsed = parse_with_signature(&f.to_string(), &mut sig).unwrap();
            prop_assert!(sig.check_formula(&parsed).is_ok());
        }
        let named: Vec<NamedFormula> = fs.iter().enumerate().map(|(i, f)| nf(&format!("f{i}"), f)).collect();
        let cs = compile_problem(&named, None);
        prop_assert!(cs.len() >= 2);
    }

    #[test]
    fn skolem_arguments_are_the_universals_in_scope(f in formula(), negate in any::<bool>()) {
        let st = translate_sentence(&f.universal_closure());
        let input = nnf(&if negate { FoFormula::not(st) } else { st });
        let mut expected = Vec::new();
        expected_scopes(&input, &mut Vec::new(), &mut expected);
        let sk = skolemize(&input, &mut 0);
        prop_assert_eq!(sk.introductions.len(), expected.len());
        for (intro, want) in sk.introductions.iter().zip(&expected) {
            let got: Vec<Var> = intro.scope.iter().map(original_name).collect();
            prop_assert_eq!(&got, want);
            let args: Vec<FoTerm> = intro.scope.iter().cloned().map(FoTerm::var).collect();
            prop_assert_eq!(intro.term.args(), args.as_slice());
        }
        let ids: BTreeSet<u32> = sk.introductions.iter().map(|i| i.id).collect();
        prop_assert_eq!(ids.len(), sk.introductions.len());
    }

    #[test]
    fn provenance_is_total_and_seriality_appears_once(
        fs in prop::collection::vec(formula(), 0..4),
        goal in prop::option::of(formula()),
    ) {
        let named: Vec<NamedFormula> = fs.iter().enumerate().map(|(i, f)| nf(&format!("f{i}"), f)).collect();
        let g = goal.map(|g| nf("goal", &g));
        let cs = compile_problem(&named, g.as_ref());
        let mut serial = Vec::new();
        for (i, c) in cs.clauses.iter().enumerate() {
            match &c.source {
                ClauseSource::Axiom { name } => prop_assert!(named.iter().any(|n| &n.name == name)),
                ClauseSource::Goal { name } => prop_assert_eq!(name, "goal"),
                ClauseSource::Seriality { modality } => serial.push((i, *modality)),
            }
        }
        let n = cs.len();
        prop_assert_eq!(serial, vec![(n - 2, Modality::Deontic), (n - 1, Modality::Ideal)]);
    }

    #[test]
    fn cnf_export_round_trips(
        fs in prop::collection::vec(formula(), 0..4),
        goal in prop::option::of(formula()),
    ) {
        let named: Vec<NamedFormula> = fs.iter().enumerate().map(|(i, f)| nf(&format!("rule {i}"), f)).collect();
        let g = goal.map(|g| nf("the \"goal\"", &g));
        let cs = compile_problem(&named, g.as_ref());
        prop_assert_eq!(import_cnf(&export_cnf(&cs)).unwrap(), cs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn propositional_transparency(f in propositional()) {
        let cs = compile_problem(&[nf("f", &f)], None);
        let limits = ResourceLimits::default();
        match prove(&cs, limits) {
            ProverResult::Proved { certificate } => {
                prop_assert!(!satisfiable_by_table(&f), "{}", f);
                prop_assert_eq!(check_proof(&cs, &certificate), Ok(true));
            }
            ProverResult::CounterSatisfiable { model } => {
                prop_assert!(satisfiable_by_table(&f), "{}", f);
                prop_assert!(check_model(&cs, &model));
            }
            r => prop_assert!(false, "{}: {:?}", f, r),
        }
    }

    #[test]
    fn propositional_goals_are_proved_iff_tautologies(f in propositional()) {
        let cs = compile_problem(&[], Some(&nf("goal", &f)));
        let tautology = !satisfiable_by_table(&Formula::not(f.clone()));
        match prove(&cs, ResourceLimits::default()) {
            ProverResult::Proved { certificate } => {
                prop_assert!(tautology, "{}", f);
                prop_assert_eq!(check_proof(&cs, &certificate), Ok(true));
            }
            ProverResult::CounterSatisfiable { model } => {
                prop_assert!(!tautology, "{}", f);
                prop_assert!(check_model(&cs, &model));
            }
            r => prop_assert!(false, "{}: {:?}", f, r),
        }
    }

    #[test]
    fn verdicts_are_sound_and_exclusive(
        axioms in prop::collection::vec(ground_modal(), 0..3),
        goal in ground_modal(),
    ) {
        let named: Vec<NamedFormula> = axioms.iter().enumerate().map(|(i, f)| nf(&format!("a{i}"), f)).collect();
        let cs = compile_problem(&named, Some(&nf("goal", &goal)));
        let found = find_countermodel(&cs, 4, 512).unwrap();
        if let Some(m) = &found {
            prop_assert!(check_model(&cs, m));
        }
        match prove(&cs, ResourceLimits::default()) {
            ProverResult::Proved { certificate } => {
                prop_assert_eq!(check_proof(&cs, &certificate), Ok(true));
                prop_assert!(found.is_none());
            }
            ProverResult::CounterSatisfiable { model } => {
                prop_assert!(check_model(&cs, &model));
            }
            ProverResult::Unknown { .. } => {}
        }
    }

    #[test]
    fn first_order_verdicts_are_sound(
        axioms in prop::collection::vec(formula(), 1..3),
        goal in formula(),
    ) {
        let named: Vec<NamedFormula> = axioms.iter().enumerate().map(|(i, f)| nf(&format!("a{i}"), f)).collect();
        let cs = compile_problem(&named, Some(&nf("goal", &goal)));
        let limits = ResourceLimits { time_budget_ms: 300, ..ResourceLimits::default() };
        match prove(&cs, limits) {
            ProverResult::Proved { certificate } => {
                prop_assert_eq!(check_proof(&cs, &certificate), Ok(true));
            }
            ProverResult::CounterSatisfiable { model } => prop_assert!(check_model(&cs, &model)),
            ProverResult::Unknown { .. } => {}
        }
    }

    #[test]
    fn proofs_survive_larger_limits(
        axioms in prop::collection::vec(ground_modal(), 0..3),
        goal in ground_modal(),
        depth in 1u32..8,
        extra_depth in 0u32..10,
        atoms in 8usize..128,
    ) {
        let named: Vec<NamedFormula> = axioms.iter().enumerate().map(|(i, f)| nf(&format!("a{i}"), f)).collect();
        let cs = compile_problem(&named, Some(&nf("goal", &goal)));
        let small = ResourceLimits { max_depth: depth, time_budget_ms: 2000, max_ground_atoms: atoms };
        let large = ResourceLimits {
            max_depth: depth + extra_depth,
            time_budget_ms: 5000,
            max_ground_atoms: atoms * 4,
        };
        if prove(&cs, small).is_proved() {
            prop_assert!(prove(&cs, large).is_proved());
        }
    }
}
