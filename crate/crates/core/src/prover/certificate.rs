use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{ClauseSet, FoLiteral, FoTerm, Substitution, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub var: Var,
    pub term: FoTerm,
}

/// One inference. Step indices refer to earlier steps, clause indices to the
/// input clause set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ProofStep {
    /// Applies `bindings` to input clause `clause`.
    Instance {
        clause: usize,
        bindings: Vec<Binding>,
        result: Vec<FoLiteral>,
    },
    /// Binary resolution of two earlier steps after applying `bindings` to
    /// both. Every copy of the resolved literal is removed from each side and
    /// the union keeps first occurrences.
    Resolve {
        left: usize,
        left_literal: usize,
        right: usize,
        right_literal: usize,
        bindings: Vec<Binding>,
        result: Vec<FoLiteral>,
    },
}

impl ProofStep {
    pub fn result(&self) -> &[FoLiteral] {
        match self {
            ProofStep::Instance { result, .. } | ProofStep::Resolve { result, .. } => result,
        }
    }

    pub fn bindings_mut(&mut self) -> &mut Vec<Binding> {
        match self {
            ProofStep::Instance { bindings, .. } | ProofStep::Resolve { bindings, .. } => bindings,
        }
    }
}

/// A resolution refutation replayable against the clause set it came from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub steps: Vec<ProofStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalformedCertificate {
    #[error("step {step}: clause index {index} out of range")]
    ClauseIndex { step: usize, index: usize },
    #[error("step {step}: step index {index} does not refer to an earlier step")]
    StepIndex { step: usize, index: usize },
    #[error("step {step}: literal index {index} out of range")]
    LiteralIndex { step: usize, index: usize },
}

fn substitution(bindings: &[Binding]) -> Option<Substitution> {
    let mut s = Substitution::new();
    for b in bindings {
        if b.var.sort != b.term.sort() || s.insert(b.var.clone(), b.term.clone()).is_some() {
            return None;
        }
    }
    Some(s)
}

fn apply(lits: &[FoLiteral], s: &Substitution) -> Vec<FoLiteral> {
    lits.iter().map(|l| l.substitute(s)).collect()
}

/// Resolvent with set semantics on both parents.
pub(crate) fn resolvent(
    left: &[FoLiteral],
    left_literal: &FoLiteral,
    right: &[FoLiteral],
    right_literal: &FoLiteral,
) -> Vec<FoLiteral> {
    let mut out: Vec<FoLiteral> = Vec::new();
    let rest = left
        .iter()
        .filter(|l| *l != left_literal)
        .chain(right.iter().filter(|l| *l != right_literal));
    for l in rest {
        if !out.contains(l) {
            out.push(l.clone());
        }
    }
    out
}

/// Replays `cert` against `cs`. `Ok(false)` means some step does not replay
/// or the last step is not the empty clause.
pub fn check_proof(cs: &ClauseSet, cert: &ProofCertificate) -> Result<bool, MalformedCertificate> {
    let mut derived: Vec<&[FoLiteral]> = Vec::with_capacity(cert.steps.len());
    let mut ok = !cert.steps.is_empty();
    for (i, step) in cert.steps.iter().enumerate() {
        match step {
            ProofStep::Instance {
                clause,
                bindings,
                result,
            } => {
                let c = cs.clauses.get(*clause).ok_or(MalformedCertificate::ClauseIndex {
                    step: i,
                    index: *clause,
                })?;
                ok &= substitution(bindings).is_some_and(|s| apply(&c.literals, &s) == *result);
            }
            ProofStep::Resolve {
                left,
                left_literal,
                right,
                right_literal,
                bindings,
                result,
            } => {
                let parent = |index: usize| {
                    derived
                        .get(index)
                        .copied()
                        .ok_or(MalformedCertificate::StepIndex { step: i, index })
                };
                let (l, r) = (parent(*left)?, parent(*right)?);
                for (lits, index) in [(l, *left_literal), (r, *right_literal)] {
                    if index >= lits.len() {
                        return Err(MalformedCertificate::LiteralIndex { step: i, index });
                    }
                }
                ok &= substitution(bindings).is_some_and(|s| {
                    let (l, r) = (apply(l, &s), apply(r, &s));
                    let (ll, rl) = (&l[*left_literal], &r[*right_literal]);
                    *ll == rl.complement() && resolvent(&l, ll, &r, rl) == *result
                });
            }
        }
        derived.push(step.result());
    }
    Ok(ok && derived.last().is_some_and(|c| c.is_empty()))
}

fn write_clause(f: &mut fmt::Formatter<'_>, lits: &[FoLiteral]) -> fmt::Result {
    if lits.is_empty() {
        return f.write_str("$false");
    }
    for (i, l) in lits.iter().enumerate() {
        if i > 0 {
            f.write_str(" | ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

fn write_bindings(f: &mut fmt::Formatter<'_>, bindings: &[Binding]) -> fmt::Result {
    f.write_str("{")?;
    for (i, b) in bindings.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{} -> {}", b.var, b.term)?;
    }
    f.write_str("}")
}

/// One line per step:
/// `s<i> instance c<k> {V -> t, ...} : <clause>` or
/// `s<i> resolve s<a>[<lit>] s<b>[<lit>] {...} : <clause>`.
impl fmt::Display for ProofCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            write!(f, "s{i} ")?;
            match step {
                ProofStep::Instance {
                    clause, bindings, ..
                } => {
                    write!(f, "instance c{clause} ")?;
                    write_bindings(f, bindings)?;
                }
                ProofStep::Resolve {
                    left,
                    left_literal,
                    right,
                    right_literal,
                    bindings,
                    ..
                } => {
                    write!(f, "resolve s{left}[{left_literal}] s{right}[{right_literal}] ")?;
                    write_bindings(f, bindings)?;
                }
            }
            f.write_str(" : ")?;
            write_clause(f, step.result())?;
            writeln!(f)?;
        }
        Ok(())
    }
}
