use std::collections::BTreeSet;

use thiserror::Error;

use super::clausify::{simplify, Clause, ClauseSet};
use super::fol::{FoTerm, Sort, Substitution, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("individual Herbrand universe is infinite (function symbol `{symbol}`)")]
pub struct NotFinite {
    pub symbol: String,
}

/// A clause set with every individual variable instantiated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grounding {
    pub clauses: ClauseSet,
    /// The individual Herbrand universe, in sorted order.
    pub individuals: Vec<FoTerm>,
}

impl Grounding {
    /// Distinct domain atoms once worlds are ignored.
    pub fn domain_atom_count(&self) -> usize {
        let mut atoms = BTreeSet::new();
        for c in &self.clauses.clauses {
            for l in &c.literals {
                if let super::fol::FoAtom::Pred {
                    predicate, args, ..
                } = &l.atom
                {
                    atoms.insert((predicate.clone(), args.clone()));
                }
            }
        }
        atoms.len()
    }
}

fn collect_constants(t: &FoTerm, out: &mut BTreeSet<FoTerm>) -> Result<(), NotFinite> {
    match t {
        FoTerm::Fn { symbol, args } if !args.is_empty() => Err(NotFinite {
            symbol: symbol.clone(),
        }),
        FoTerm::SkolemInd { id, args } if !args.is_empty() => Err(NotFinite {
            symbol: super::fol::skolem_ind_name(*id),
        }),
        FoTerm::Fn { .. } | FoTerm::SkolemInd { .. } => {
            out.insert(t.clone());
            Ok(())
        }
        _ => t.args().iter().try_for_each(|a| collect_constants(a, out)),
    }
}

/// Instantiates individual variables over all individual constants when no
/// individual function symbol of positive arity occurs. World variables stay
/// symbolic. A fresh constant stands in when the set has none.
pub fn ground_if_finite(cs: &ClauseSet) -> Result<Grounding, NotFinite> {
    let mut constants = BTreeSet::new();
    for c in &cs.clauses {
        for l in &c.literals {
            for t in l.atom.terms() {
                collect_constants(t, &mut constants)?;
            }
        }
    }
    if constants.is_empty() {
        let id = cs.max_skolem_id().map_or(0, |m| m + 1);
        constants.insert(FoTerm::SkolemInd { id, args: vec![] });
    }
    let individuals: Vec<FoTerm> = constants.into_iter().collect();

    let mut clauses = Vec::new();
    for c in &cs.clauses {
        let vars: Vec<Var> = c
            .variables()
            .into_iter()
            .filter(|v| v.sort == Sort::Individual)
            .collect();
        for_each_tuple(individuals.len(), vars.len(), |tuple| {
            let s: Substitution = vars
                .iter()
                .cloned()
                .zip(tuple.iter().map(|&i| individuals[i].clone()))
                .collect();
            let lits = c.literals.iter().map(|l| l.substitute(&s)).collect();
            if let Some(literals) = simplify(lits) {
                clauses.push(Clause {
                    literals,
                    source: c.source.clone(),
                });
            }
        });
    }
    Ok(Grounding {
        clauses: ClauseSet { clauses },
        individuals,
    })
}

/// Calls `f` on every tuple in `0..base` of length `len`, lexicographically.
pub(crate) fn for_each_tuple(base: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; len];
    if len > 0 && base == 0 {
        return;
    }
    loop {
        f(&tuple);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < base {
                break;
            }
            tuple[i] = 0;
        }
    }
}
