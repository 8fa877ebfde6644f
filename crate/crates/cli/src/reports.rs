//! Report builders shared by the HTTP handlers and the command line, so both
//! surfaces emit the same payloads for the same inputs.

use serde::{Deserialize, Serialize};

use deontix_core::annotation::{
    compile_document, extract_vocabulary, query_spec, Compiled, Document, DocumentKind, Vocabulary,
};
use deontix_core::embedding::{compile_problem, export_cnf, ClauseSet};
use deontix_core::logic::NamedFormula;
use deontix_core::prover::ResourceLimits;
use deontix_core::services::{
    check_consistency, check_independence, run_query, run_test_suite, Consistency,
    ConsistencyReport, FormalizationReport, Independence, QueryResult, QuerySpec, TestReport,
    Verdict,
};

use crate::error::ApiError;

/// A compiled formula as shown on the formalization view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormulaListing {
    pub name: String,
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
}

impl From<&NamedFormula> for FormulaListing {
    fn from(nf: &NamedFormula) -> Self {
        FormulaListing {
            name: nf.name.clone(),
            formula: nf.formula.to_string(),
            origin: nf.origin.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormulaListingReport {
    pub document: String,
    pub formulas: Vec<FormulaListing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyPayload {
    pub document: String,
    pub formulas: Vec<FormulaListing>,
    pub consistency: ConsistencyReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IndependencePayload {
    pub document: String,
    pub report: FormalizationReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExportPayload {
    pub document: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    pub clauses: usize,
    pub cnf: String,
}

/// Process exit status for a definitive positive, definitive negative or
/// undecided outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Positive,
    Negative,
    Undecided,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 1,
            Outcome::Undecided => 2,
        }
    }

    pub fn of_verdict(v: Verdict) -> Self {
        match v {
            Verdict::Valid => Outcome::Positive,
            Verdict::CounterSatisfiable => Outcome::Negative,
            Verdict::Unknown => Outcome::Undecided,
        }
    }
}

fn expect_kind(d: &Document, kind: DocumentKind) -> Result<(), ApiError> {
    if d.kind == kind {
        return Ok(());
    }
    Err(ApiError::new(
        422,
        "wrong_document_kind",
        format!("document `{}` is not a {kind:?} document", d.id).to_lowercase(),
    ))
}

fn compile(d: &Document) -> Result<Compiled, ApiError> {
    Ok(compile_document(d)?)
}

fn query_of(d: &Document) -> Result<QuerySpec, ApiError> {
    expect_kind(d, DocumentKind::Query)?;
    Ok(query_spec(d)?)
}

pub fn formulas(d: &Document) -> Result<FormulaListingReport, ApiError> {
    let c = compile(d)?;
    Ok(FormulaListingReport {
        document: d.id.clone(),
        formulas: c.formulas.iter().map(FormulaListing::from).collect(),
    })
}

pub fn consistency(d: &Document, limits: ResourceLimits) -> Result<ConsistencyPayload, ApiError> {
    limits.validate()?;
    let c = compile(d)?;
    let consistency = check_consistency(&c.theory(), limits);
    Ok(ConsistencyPayload {
        document: d.id.clone(),
        formulas: c.formulas.iter().map(FormulaListing::from).collect(),
        consistency,
    })
}

impl ConsistencyPayload {
    pub fn outcome(&self) -> Outcome {
        match self.consistency.status {
            Consistency::Consistent => Outcome::Positive,
            Consistency::Inconsistent => Outcome::Negative,
            Consistency::Unknown => Outcome::Undecided,
        }
    }
}

pub fn independence(d: &Document, limits: ResourceLimits) -> Result<IndependencePayload, ApiError> {
    limits.validate()?;
    let c = compile(d)?;
    Ok(IndependencePayload {
        document: d.id.clone(),
        report: check_independence(&c.theory(), limits),
    })
}

impl IndependencePayload {
    /// Negative if the theory is inconsistent or any formula is dependent.
    pub fn outcome(&self) -> Outcome {
        let r = &self.report;
        if r.consistent == Some(false) || r.per_formula.iter().any(|f| f.status == Independence::Dependent) {
            Outcome::Negative
        } else if r.consistent.is_none() || r.per_formula.iter().any(|f| f.status == Independence::Unknown) {
            Outcome::Undecided
        } else {
            Outcome::Positive
        }
    }
}

pub fn query(
    query: &Document,
    legislation: &Document,
    limits: ResourceLimits,
) -> Result<QueryResult, ApiError> {
    limits.validate()?;
    expect_kind(legislation, DocumentKind::Legislation)?;
    let q = query_of(query)?;
    let law = compile(legislation)?;
    Ok(run_query(&law.theory(), &q, limits)?)
}

pub fn tests(
    legislation: &Document,
    queries: &[Document],
    limits: ResourceLimits,
) -> Result<TestReport, ApiError> {
    limits.validate()?;
    expect_kind(legislation, DocumentKind::Legislation)?;
    let law = compile(legislation)?;
    let specs = queries.iter().map(query_of).collect::<Result<Vec<_>, _>>()?;
    Ok(run_test_suite(&law.theory(), &specs, limits))
}

/// Negative if any test failed with a definitive verdict.
pub fn tests_outcome(r: &TestReport) -> Outcome {
    let failed = r.tests.iter().filter(|t| !t.passed);
    let mut outcome = Outcome::Positive;
    for t in failed {
        if t.actual == Verdict::Unknown {
            outcome = Outcome::Undecided;
        } else {
            return Outcome::Negative;
        }
    }
    outcome
}

pub fn vocabulary(docs: &[Document]) -> Vocabulary {
    extract_vocabulary(docs)
}

/// The clause set a consistency check (no query) or a query run would hand
/// to the prover.
pub fn problem(legislation: &Document, query: Option<&Document>) -> Result<ClauseSet, ApiError> {
    let law = compile(legislation)?;
    Ok(match query {
        None => compile_problem(&law.formulas, None),
        Some(qd) => {
            let q = query_of(qd)?;
            q.signature_over(&law.signature)
                .map_err(|source| ApiError::new(422, source.code(), source.to_string()))?;
            let axioms: Vec<NamedFormula> =
                law.formulas.iter().chain(&q.assumptions).cloned().collect();
            let goal = NamedFormula {
                name: q.name.clone(),
                formula: q.goal,
                origin: None,
            };
            compile_problem(&axioms, Some(&goal))
        }
    })
}

pub fn export(legislation: &Document, query: Option<&Document>) -> Result<ExportPayload, ApiError> {
    let cs = problem(legislation, query)?;
    Ok(ExportPayload {
        document: legislation.id.clone(),
        query: query.map(|q| q.id.clone()),
        clauses: cs.len(),
        cnf: export_cnf(&cs),
    })
}

/// Removes every `elapsedMs` field, the only run-dependent part of a report.
pub fn without_timings(mut v: serde_json::Value) -> serde_json::Value {
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(m) => {
                m.remove("elapsedMs");
                m.values_mut().for_each(strip);
            }
            serde_json::Value::Array(a) => a.iter_mut().for_each(strip),
            _ => {}
        }
    }
    strip(&mut v);
    v
}
