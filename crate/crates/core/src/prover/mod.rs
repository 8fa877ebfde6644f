//! Refutation prover for compiled clause sets.
//!
//! Each round `k` runs the connection search with paths of length `k` and,
//! when the individual universe is finite and small enough, a finite model
//! search with `k` worlds. The first definite answer wins.

mod certificate;
mod connection;
mod limits;
mod matrix;
mod model;
mod sat;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::embedding::{ground_if_finite, ClauseSet};

pub use certificate::{check_proof, Binding, MalformedCertificate, ProofCertificate, ProofStep};
pub use limits::{InvalidLimits, ResourceLimits};
pub use model::{
    check_model, find_countermodel, fits_ground_limit, AtomValuation, Element,
    KripkeCountermodel, ModelSearchError, SkolemValue,
};

use connection::{ConnectionProver, DepthOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownReason {
    DepthExhausted,
    TimeExhausted,
    GroundingTooLarge,
}

impl UnknownReason {
    pub fn as_str(self) -> &'static str {
        match self {
            UnknownReason::DepthExhausted => "depth-exhausted",
            UnknownReason::TimeExhausted => "time-exhausted",
            UnknownReason::GroundingTooLarge => "grounding-too-large",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ProverResult {
    Proved { certificate: ProofCertificate },
    CounterSatisfiable { model: KripkeCountermodel },
    Unknown { reason: UnknownReason },
}

impl ProverResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProverResult::Proved { .. })
    }

    pub fn is_counter_satisfiable(&self) -> bool {
        matches!(self, ProverResult::CounterSatisfiable { .. })
    }
}

const SEARCH_STACK: usize = 256 << 20;

/// Tries to refute `cs`. Deterministic for fixed input and limits, up to
/// where the time budget cuts the search.
pub fn prove(cs: &ClauseSet, limits: ResourceLimits) -> ProverResult {
    // The tableau search recurses once per proof step.
    std::thread::scope(|s| {
        match std::thread::Builder::new()
            .name("prover".into())
            .stack_size(SEARCH_STACK)
            .spawn_scoped(s, || run(cs, limits))
        {
            Ok(handle) => handle
                .join()
                .unwrap_or_else(|e| std::panic::resume_unwind(e)),
            Err(_) => run(cs, limits),
        }
    })
}

fn run(cs: &ClauseSet, limits: ResourceLimits) -> ProverResult {
    let deadline = Instant::now() + Duration::from_millis(limits.time_budget_ms);
    let unknown = |reason| ProverResult::Unknown { reason };
    let grounding = ground_if_finite(cs).ok();
    let atoms = grounding.as_ref().map_or(0, |g| g.domain_atom_count());
    let mut connection = ConnectionProver::new(cs, deadline);
    let mut refutable = true;
    let mut blocked = false;
    for k in 1..=limits.max_depth as usize {
        if refutable {
            match connection.search(k) {
                DepthOutcome::Proved => {
                    return ProverResult::Proved {
                        certificate: connection.certificate(),
                    }
                }
                DepthOutcome::Exhausted => refutable = false,
                DepthOutcome::Limited => {}
                DepthOutcome::Timeout => return unknown(UnknownReason::TimeExhausted),
            }
        }
        if let Some(g) = &grounding {
            if fits_ground_limit(atoms, k, limits.max_ground_atoms) {
                match model::search_worlds(g, k, deadline) {
                    Ok(Some(model)) => return ProverResult::CounterSatisfiable { model },
                    Ok(None) => {}
                    Err(sat::Timeout) => return unknown(UnknownReason::TimeExhausted),
                }
            } else {
                blocked = true;
            }
        }
        if !refutable && (grounding.is_none() || blocked) {
            break;
        }
        if Instant::now() >= deadline {
            return unknown(UnknownReason::TimeExhausted);
        }
    }
    unknown(if blocked {
        UnknownReason::GroundingTooLarge
    } else {
        UnknownReason::DepthExhausted
    })
}
