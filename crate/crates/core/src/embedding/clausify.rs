use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::NamedFormula;

use super::fol::{FoAtom, FoFormula, FoLiteral, FoTerm, Sort, Substitution, Var};
use super::modal::Modality;
use super::translate::translate_sentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Axiom,
    NegatedGoal,
}

/// A named closed first-order sentence queued for clausification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub name: String,
    pub role: Role,
    pub formula: FoFormula,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClauseSource {
    Axiom { name: String },
    Goal { name: String },
    Seriality { modality: Modality },
}

impl fmt::Display for ClauseSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClauseSource::Axiom { name } => write!(f, "axiom {name:?}"),
            ClauseSource::Goal { name } => write!(f, "goal {name:?}"),
            ClauseSource::Seriality { modality } => write!(f, "seriality {}", modality.tag()),
        }
    }
}

/// A disjunction of literals, implicitly universally closed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub literals: Vec<FoLiteral>,
    pub source: ClauseSource,
}

impl Clause {
    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.literals.iter().for_each(|l| l.atom.collect_vars(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("$false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseSet {
    pub clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn provenance(&self, index: usize) -> Option<&ClauseSource> {
        self.clauses.get(index).map(|c| &c.source)
    }

    /// The seriality clauses `R_m(W, f_m(W))`.
    pub fn seriality(&self) -> impl Iterator<Item = &Clause> {
        self.clauses
            .iter()
            .filter(|c| matches!(c.source, ClauseSource::Seriality { .. }))
    }

    /// Largest Skolem id in use, if any.
    pub fn max_skolem_id(&self) -> Option<u32> {
        fn walk(t: &FoTerm, best: &mut Option<u32>) {
            if let FoTerm::SkolemInd { id, .. } | FoTerm::SkolemWorld { id, .. } = t {
                *best = Some(best.map_or(*id, |b: u32| b.max(*id)));
            }
            t.args().iter().for_each(|a| walk(a, best));
        }
        let mut best = None;
        for c in &self.clauses {
            for l in &c.literals {
                l.atom.terms().into_iter().for_each(|t| walk(t, &mut best));
            }
        }
        best
    }
}

/// Negation normal form: negation only on atoms, no implications.
pub fn nnf(f: &FoFormula) -> FoFormula {
    fn go(f: &FoFormula, positive: bool) -> FoFormula {
        use FoFormula as F;
        match (f, positive) {
            (F::Atom(_), true) => f.clone(),
            (F::Atom(_), false) => F::not(f.clone()),
            (F::Not(g), p) => go(g, !p),
            (F::And(l, r), true) => F::and(go(l, true), go(r, true)),
            (F::And(l, r), false) => F::or(go(l, false), go(r, false)),
            (F::Or(l, r), true) => F::or(go(l, true), go(r, true)),
            (F::Or(l, r), false) => F::and(go(l, false), go(r, false)),
            (F::Implies(l, r), true) => F::or(go(l, false), go(r, true)),
            (F::Implies(l, r), false) => F::and(go(l, true), go(r, false)),
            (F::Forall(v, g), true) => F::forall(v.clone(), go(g, true)),
            (F::Forall(v, g), false) => F::exists(v.clone(), go(g, false)),
            (F::Exists(v, g), true) => F::exists(v.clone(), go(g, true)),
            (F::Exists(v, g), false) => F::forall(v.clone(), go(g, false)),
        }
    }
    go(f, true)
}

/// Record of one existential replaced by a Skolem term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemIntro {
    pub id: u32,
    pub sort: Sort,
    /// Universally quantified variables in scope, outermost first.
    pub scope: Vec<Var>,
    pub term: FoTerm,
}

#[derive(Debug, Clone)]
pub struct Skolemized {
    /// NNF formula without existentials; universal variables renamed apart.
    pub formula: FoFormula,
    pub introductions: Vec<SkolemIntro>,
}

/// Replaces every existential of an NNF formula by a Skolem term over the
/// universal variables in scope. Ids are drawn from `next_id`.
pub fn skolemize(f: &FoFormula, next_id: &mut u32) -> Skolemized {
    struct Ctx<'a> {
        next_id: &'a mut u32,
        renamed: usize,
        scope: Vec<Var>,
        binding: Substitution,
        intros: Vec<SkolemIntro>,
    }

    fn go(f: &FoFormula, cx: &mut Ctx<'_>) -> FoFormula {
        use FoFormula as F;
        match f {
            F::Atom(a) => F::Atom(a.substitute(&cx.binding)),
            F::Not(g) => F::not(go(g, cx)),
            F::And(l, r) => F::and(go(l, cx), go(r, cx)),
            F::Or(l, r) => F::or(go(l, cx), go(r, cx)),
            F::Implies(l, r) => F::implies(go(l, cx), go(r, cx)),
            F::Forall(v, g) => {
                cx.renamed += 1;
                let fresh = Var {
                    name: format!("{}_{}", v.name, cx.renamed),
                    sort: v.sort,
                };
                let saved = cx.binding.insert(v.clone(), FoTerm::var(fresh.clone()));
                cx.scope.push(fresh.clone());
                let body = go(g, cx);
                cx.scope.pop();
                restore(&mut cx.binding, v, saved);
                F::forall(fresh, body)
            }
            F::Exists(v, g) => {
                let id = *cx.next_id;
                *cx.next_id += 1;
                let args: Vec<FoTerm> = cx.scope.iter().cloned().map(FoTerm::var).collect();
                let term = match v.sort {
                    Sort::World => FoTerm::SkolemWorld { id, args },
                    Sort::Individual => FoTerm::SkolemInd { id, args },
                };
                cx.intros.push(SkolemIntro {
                    id,
                    sort: v.sort,
                    scope: cx.scope.clone(),
                    term: term.clone(),
                });
                let saved = cx.binding.insert(v.clone(), term);
                let body = go(g, cx);
                restore(&mut cx.binding, v, saved);
                body
            }
        }
    }

    fn restore(binding: &mut Substitution, v: &Var, saved: Option<FoTerm>) {
        match saved {
            Some(t) => {
                binding.insert(v.clone(), t);
            }
            None => {
                binding.remove(v);
            }
        }
    }

    let mut cx = Ctx {
        next_id,
        renamed: 0,
        scope: Vec::new(),
        binding: Substitution::new(),
        intros: Vec::new(),
    };
    let formula = go(f, &mut cx);
    Skolemized {
        formula,
        introductions: cx.intros,
    }
}

/// Conjunctive normal form of a universal formula; quantifiers are dropped.
///
/// # Panics
///
/// If `f` still contains an existential quantifier.
pub fn cnf(f: &FoFormula) -> Vec<Vec<FoLiteral>> {
    use FoFormula as F;
    match f {
        F::Atom(a) => vec![vec![FoLiteral::pos(a.clone())]],
        F::Not(g) => match g.as_ref() {
            F::Atom(a) => vec![vec![FoLiteral::neg(a.clone())]],
            _ => cnf(&nnf(f)),
        },
        F::And(l, r) => {
            let mut out = cnf(l);
            out.extend(cnf(r));
            out
        }
        F::Or(l, r) => {
            let (ls, rs) = (cnf(l), cnf(r));
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for a in &ls {
                for b in &rs {
                    out.push(a.iter().chain(b).cloned().collect());
                }
            }
            out
        }
        F::Forall(_, g) => cnf(g),
        F::Implies(..) => cnf(&nnf(f)),
        F::Exists(..) => panic!("cnf expects a Skolemized formula"),
    }
}

/// Removes duplicate literals; `None` for tautologies.
pub(crate) fn simplify(lits: Vec<FoLiteral>) -> Option<Vec<FoLiteral>> {
    let mut out: Vec<FoLiteral> = Vec::with_capacity(lits.len());
    for l in lits {
        if out.iter().any(|m| m.atom == l.atom && m.positive != l.positive) {
            return None;
        }
        if !out.contains(&l) {
            out.push(l);
        }
    }
    Some(out)
}

/// Renames variables to `X0, X1, ...` (individuals) and `W0, W1, ...`
/// (worlds) by first occurrence.
pub fn normalize_variables(lits: &[FoLiteral]) -> Vec<FoLiteral> {
    let mut vars = Vec::new();
    lits.iter().for_each(|l| l.atom.collect_vars(&mut vars));
    let (mut ni, mut nw) = (0, 0);
    let mut s = Substitution::new();
    for v in vars {
        let name = match v.sort {
            Sort::Individual => {
                ni += 1;
                format!("X{}", ni - 1)
            }
            Sort::World => {
                nw += 1;
                format!("W{}", nw - 1)
            }
        };
        let sort = v.sort;
        s.insert(v, FoTerm::var(Var { name, sort }));
    }
    lits.iter().map(|l| l.substitute(&s)).collect()
}

fn seriality_clause(m: Modality, id: u32) -> Clause {
    let w = FoTerm::var(Var::world("W0"));
    Clause {
        literals: vec![FoLiteral::pos(FoAtom::Access {
            modality: m,
            from: w.clone(),
            to: FoTerm::SkolemWorld { id, args: vec![w] },
        })],
        source: ClauseSource::Seriality { modality: m },
    }
}

/// Clausifies closed sentences. Negated goals are negated first. The two
/// seriality clauses are appended once at the end.
pub fn clausify(sentences: &[Sentence]) -> ClauseSet {
    let mut next_id = 0u32;
    let mut clauses = Vec::new();
    for s in sentences {
        let (input, source) = match s.role {
            Role::Axiom => (s.formula.clone(), ClauseSource::Axiom { name: s.name.clone() }),
            Role::NegatedGoal => (
                FoFormula::not(s.formula.clone()),
                ClauseSource::Goal { name: s.name.clone() },
            ),
        };
        let sk = skolemize(&nnf(&input), &mut next_id);
        for lits in cnf(&sk.formula) {
            if let Some(lits) = simplify(lits) {
                clauses.push(Clause {
                    literals: normalize_variables(&lits),
                    source: source.clone(),
                });
            }
        }
    }
    for m in Modality::ALL {
        clauses.push(seriality_clause(m, next_id));
        next_id += 1;
    }
    ClauseSet { clauses }
}

/// Translates axioms and an optional goal to a clause set: the goal is
/// negated, so the set is unsatisfiable iff the axioms entail the goal
/// (or are inconsistent, when there is no goal).
pub fn compile_problem(axioms: &[NamedFormula], goal: Option<&NamedFormula>) -> ClauseSet {
    let mut sentences: Vec<Sentence> = axioms
        .iter()
        .map(|nf| Sentence {
            name: nf.name.clone(),
            role: Role::Axiom,
            formula: translate_sentence(&nf.formula),
        })
        .collect();
    if let Some(g) = goal {
        sentences.push(Sentence {
            name: g.name.clone(),
            role: Role::NegatedGoal,
            formula: translate_sentence(&g.formula),
        });
    }
    clausify(&sentences)
}

/// Skolem-term occurrences grouped by id, for inspection.
pub fn skolem_terms(cs: &ClauseSet) -> BTreeMap<u32, Vec<FoTerm>> {
    fn walk(t: &FoTerm, out: &mut BTreeMap<u32, Vec<FoTerm>>) {
        if let FoTerm::SkolemInd { id, .. } | FoTerm::SkolemWorld { id, .. } = t {
            let e = out.entry(*id).or_default();
            if !e.contains(t) {
                e.push(t.clone());
            }
        }
        t.args().iter().for_each(|a| walk(a, out));
    }
    let mut out = BTreeMap::new();
    for c in &cs.clauses {
        for l in &c.literals {
            l.atom.terms().into_iter().for_each(|t| walk(t, &mut out));
        }
    }
    out
}
