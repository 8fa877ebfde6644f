//! Consistency, independence, query execution and the test-suite runner.
//!
//! Every service call compiles its own clause set and owns its prover run;
//! nothing is cached between calls.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{compile_problem, ClauseSet};
use crate::logic::{ClosedFormula, LogicError, NamedFormula, Signature, Theory};
use crate::prover::{
    prove, KripkeCountermodel, ProofCertificate, ProverResult, ResourceLimits, UnknownReason,
};

/// Prefix marking a query as a behavioural test.
pub const TEST_PREFIX: &str = "Test ";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("query `{query}`: {source}")]
    Signature {
        query: String,
        #[source]
        source: LogicError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuerySpec {
    pub name: String,
    pub assumptions: Vec<NamedFormula>,
    pub goal: ClosedFormula,
    pub is_test: bool,
}

impl QuerySpec {
    pub fn new(name: impl Into<String>, assumptions: Vec<NamedFormula>, goal: ClosedFormula) -> Self {
        let name = name.into();
        QuerySpec {
            is_test: name.starts_with(TEST_PREFIX),
            name,
            assumptions,
            goal,
        }
    }

    /// The query's own symbols merged into `base`.
    pub fn signature_over(&self, base: &Signature) -> Result<Signature, LogicError> {
        let mut sig = base.clone();
        for nf in &self.assumptions {
            sig.declare_formula(&nf.formula.body)?;
        }
        sig.declare_formula(&self.goal.body)?;
        Ok(sig)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    CounterSatisfiable,
    Unknown,
}

/// Outcome of one prover run, with the evidence it produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ProofCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<KripkeCountermodel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<UnknownReason>,
}

impl Evidence {
    fn split(result: ProverResult) -> (Verdict, Evidence) {
        let mut ev = Evidence {
            certificate: None,
            countermodel: None,
            reason: None,
        };
        let verdict = match result {
            ProverResult::Proved { certificate } => {
                ev.certificate = Some(certificate);
                Verdict::Valid
            }
            ProverResult::CounterSatisfiable { model } => {
                ev.countermodel = Some(model);
                Verdict::CounterSatisfiable
            }
            ProverResult::Unknown { reason } => {
                ev.reason = Some(reason);
                Verdict::Unknown
            }
        };
        (verdict, ev)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryResult {
    pub query: String,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub evidence: Evidence,
    pub elapsed_ms: u64,
    pub limits_used: ResourceLimits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Consistency {
    Consistent,
    Inconsistent,
    Unknown,
}

impl Consistency {
    /// `None` when undecided.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Consistency::Consistent => Some(true),
            Consistency::Inconsistent => Some(false),
            Consistency::Unknown => None,
        }
    }
}

/// A satisfying model backs `consistent`; a refutation backs `inconsistent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyReport {
    pub status: Consistency,
    #[serde(flatten)]
    pub evidence: Evidence,
    pub elapsed_ms: u64,
    pub limits_used: ResourceLimits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Independence {
    Independent,
    Dependent,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormulaStatus {
    pub name: String,
    pub formula: String,
    pub status: Independence,
    #[serde(flatten)]
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormalizationReport {
    /// `null` when the consistency check was inconclusive.
    pub consistent: Option<bool>,
    /// One entry per formula, in theory order.
    pub per_formula: Vec<FormulaStatus>,
    pub elapsed_ms: u64,
    pub limits_used: ResourceLimits,
}

impl FormalizationReport {
    pub fn status_of(&self, name: &str) -> Option<Independence> {
        self.per_formula.iter().find(|f| f.name == name).map(|f| f.status)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestOutcome {
    pub name: String,
    pub expected: Verdict,
    pub actual: Verdict,
    pub passed: bool,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Queries without the test prefix.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestReport {
    pub tests: Vec<TestOutcome>,
    pub summary: TestSummary,
    pub limits_used: ResourceLimits,
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn timed_prove(cs: &ClauseSet, limits: ResourceLimits) -> (ProverResult, u64) {
    let start = Instant::now();
    let r = prove(cs, limits);
    (r, elapsed_ms(start))
}

/// Decides whether falsum follows from all formulas of `t`.
pub fn check_consistency(t: &Theory, limits: ResourceLimits) -> ConsistencyReport {
    let cs = compile_problem(&t.formulas, None);
    let (result, elapsed_ms) = timed_prove(&cs, limits);
    let (verdict, evidence) = Evidence::split(result);
    let status = match verdict {
        Verdict::Valid => Consistency::Inconsistent,
        Verdict::CounterSatisfiable => Consistency::Consistent,
        Verdict::Unknown => Consistency::Unknown,
    };
    ConsistencyReport {
        status,
        evidence,
        elapsed_ms,
        limits_used: limits,
    }
}

fn independence_of(t: &Theory, index: usize, limits: ResourceLimits) -> FormulaStatus {
    let target = &t.formulas[index];
    let rest = t.without(index);
    let cs = compile_problem(&rest.formulas, Some(target));
    let (verdict, evidence) = Evidence::split(prove(&cs, limits));
    let status = match verdict {
        Verdict::Valid => Independence::Dependent,
        Verdict::CounterSatisfiable => Independence::Independent,
        Verdict::Unknown => Independence::Unknown,
    };
    FormulaStatus {
        name: target.name.clone(),
        formula: target.formula.to_string(),
        status,
        evidence,
    }
}

fn worker_count(jobs: usize) -> usize {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    jobs.clamp(1, cores.min(4))
}

/// Consistency of `t` plus, for each formula, whether the others entail it.
///
/// Per-formula runs are independent and may execute in parallel; the report
/// keeps theory order.
pub fn check_independence(t: &Theory, limits: ResourceLimits) -> FormalizationReport {
    let start = Instant::now();
    let consistent = if t.is_empty() {
        Some(true)
    } else {
        check_consistency(t, limits).status.as_bool()
    };
    let n = t.len();
    let workers = worker_count(n);
    let mut slots: Vec<Option<FormulaStatus>> = vec![None; n];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..n)
                        .step_by(workers)
                        .map(|i| (i, independence_of(t, i, limits)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, status) in h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)) {
                slots[i] = Some(status);
            }
        }
    });
    FormalizationReport {
        consistent,
        per_formula: slots.into_iter().map(|s| s.expect("every index ran")).collect(),
        elapsed_ms: elapsed_ms(start),
        limits_used: limits,
    }
}

/// Decides `t ∪ assumptions ⊢ goal`.
pub fn run_query(t: &Theory, q: &QuerySpec, limits: ResourceLimits) -> Result<QueryResult, ServiceError> {
    q.signature_over(&t.signature).map_err(|source| ServiceError::Signature {
        query: q.name.clone(),
        source,
    })?;
    let axioms: Vec<NamedFormula> = t.formulas.iter().chain(&q.assumptions).cloned().collect();
    let goal = NamedFormula {
        name: q.name.clone(),
        formula: q.goal.clone(),
        origin: None,
    };
    let cs = compile_problem(&axioms, Some(&goal));
    let (result, elapsed_ms) = timed_prove(&cs, limits);
    let (verdict, evidence) = Evidence::split(result);
    Ok(QueryResult {
        query: q.name.clone(),
        verdict,
        evidence,
        elapsed_ms,
        limits_used: limits,
    })
}

/// Runs every test query; a test passes iff its goal is proved.
///
/// A query that cannot even be posed (signature conflict) is recorded as a
/// failed test with an `unknown` verdict.
pub fn run_test_suite(t: &Theory, queries: &[QuerySpec], limits: ResourceLimits) -> TestReport {
    let mut tests = Vec::new();
    let mut summary = TestSummary::default();
    for q in queries {
        if !q.is_test {
            summary.skipped += 1;
            continue;
        }
        let (actual, elapsed_ms) = match run_query(t, q, limits) {
            Ok(r) => (r.verdict, r.elapsed_ms),
            Err(_) => (Verdict::Unknown, 0),
        };
        let passed = actual == Verdict::Valid;
        summary.total += 1;
        if passed {
            summary.passed += 1;
        } else {
            summary.failed += 1;
        }
        tests.push(TestOutcome {
            name: q.name.clone(),
            expected: Verdict::Valid,
            actual,
            passed,
            elapsed_ms,
        });
    }
    TestReport {
        tests,
        summary,
        limits_used: limits,
    }
}
