//! Problem builders shared by the benchmarks in `benches/`.

use std::path::{Path, PathBuf};

use deontix_cli::cli::read_document;
use deontix_cli::reports::problem;
use deontix_core::embedding::{compile_problem, ClauseSet};
use deontix_core::logic::{parse_formula, NamedFormula};

/// Goals valid in KD, followed by ones that are not.
pub const KD_GOALS: &[&str] = &[
    "Ob p => Pm p",
    "Ob (p & q) => Ob p",
    "(Ob p & Ob q) => Ob (p & q)",
    "(Fb p => Ob !p) & (Ob !p => Fb p)",
    "p => Ob p",
    "Ob p => p",
    "Pm p => Ob p",
];

pub const FIXTURE_QUERIES: &[&str] = &["case-1", "case-2", "test-scenario-1", "test-scenario-2"];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn kd_problem(goal: &str) -> ClauseSet {
    let g = NamedFormula::new("goal", &parse_formula(goal).expect("suite goal parses"));
    compile_problem(&[], Some(&g))
}

/// Clause set for a fixture query against the article fixture.
pub fn fixture_problem(query: &str) -> ClauseSet {
    let law = read_document(&fixtures().join("article-1.json")).expect("article fixture");
    let q = read_document(&fixtures().join("queries").join(format!("{query}.json"))).expect("query fixture");
    problem(&law, Some(&q)).expect("fixture compiles")
}
