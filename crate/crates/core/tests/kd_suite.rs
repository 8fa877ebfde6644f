use std::time::{Duration, Instant};

use deontix_core::embedding::compile_problem;
use deontix_core::logic::{parse_formula, NamedFormula};
use deontix_core::prover::{check_model, check_proof, prove, ProverResult, ResourceLimits};

const THEOREMS: &[&str] = &[
    "Ob p => Pm p",
    "Ob (p & q) => Ob p",
    "(Ob p & Ob q) => Ob (p & q)",
    "(Fb p => Ob !p) & (Ob !p => Fb p)",
];

const NON_THEOREMS: &[&str] = &["p => Ob p", "Ob p => p", "Pm p => Ob p"];

fn run(goal: &str) -> (ProverResult, Duration, deontix_core::embedding::ClauseSet) {
    let g = NamedFormula::new("goal", &parse_formula(goal).unwrap());
    let cs = compile_problem(&[], Some(&g));
    let start = Instant::now();
    let r = prove(&cs, ResourceLimits::default());
    (r, start.elapsed(), cs)
}

#[test]
fn kd_theorems_are_proved_quickly() {
    for t in THEOREMS {
        let (r, took, cs) = run(t);
        let ProverResult::Proved { certificate } = r else {
            panic!("{t}: {r:?}")
        };
        assert_eq!(check_proof(&cs, &certificate), Ok(true), "{t}");
        assert!(took < Duration::from_secs(1), "{t} took {took:?}");
    }
}

#[test]
fn kd_non_theorems_have_countermodels() {
    for t in NON_THEOREMS {
        let (r, took, cs) = run(t);
        let ProverResult::CounterSatisfiable { model } = r else {
            panic!("{t}: {r:?}")
        };
        assert!(check_model(&cs, &model), "{t}");
        assert!(took < Duration::from_secs(1), "{t} took {took:?}");
    }
}
