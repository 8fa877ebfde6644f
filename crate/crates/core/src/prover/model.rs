//! Finite Kripke countermodels: SAT-based search over a fixed world count and
//! direct first-order model checking against the clause set.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{
    ground_if_finite, Clause, ClauseSet, FoAtom, FoLiteral, FoTerm, Grounding, Modality,
    NotFinite, Sort, Var,
};
use crate::logic::ACTUAL_WORLD;

use super::sat::{neg, pos, Lit, Solver, Timeout};

/// A domain element: a world index or an individual constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "sort", rename_all = "snake_case")]
pub enum Element {
    World { index: usize },
    Individual { term: FoTerm },
}

/// Interpretation of a world-valued Skolem function at one argument tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkolemValue {
    pub function: String,
    pub args: Vec<Element>,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AtomValuation {
    pub predicate: String,
    pub args: Vec<FoTerm>,
    /// Worlds where the atom holds; false elsewhere.
    pub true_at: Vec<usize>,
}

/// A finite serial bi-relational Kripke structure over worlds `0..worlds`,
/// with the individual domain and the Skolem interpretation that witness the
/// clause set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KripkeCountermodel {
    pub worlds: usize,
    pub actual: usize,
    pub r_d: Vec<(usize, usize)>,
    pub r_i: Vec<(usize, usize)>,
    pub individuals: Vec<FoTerm>,
    pub valuation: Vec<AtomValuation>,
    pub skolem: Vec<SkolemValue>,
}

impl KripkeCountermodel {
    pub fn relation(&self, m: Modality) -> &[(usize, usize)] {
        match m {
            Modality::Deontic => &self.r_d,
            Modality::Ideal => &self.r_i,
        }
    }

    pub fn is_serial(&self) -> bool {
        Modality::ALL.iter().all(|&m| {
            (0..self.worlds).all(|w| self.relation(m).iter().any(|&(a, _)| a == w))
        })
    }

    pub fn holds(&self, predicate: &str, args: &[FoTerm], world: usize) -> bool {
        self.valuation
            .iter()
            .any(|a| a.predicate == predicate && a.args == args && a.true_at.contains(&world))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelSearchError {
    #[error(transparent)]
    NotFinite(#[from] NotFinite),
    #[error("{atoms} ground atoms over {worlds} worlds exceed the limit of {limit}")]
    GroundingTooLarge {
        atoms: usize,
        worlds: usize,
        limit: usize,
    },
}

/// Size guard for a model search with `worlds` worlds.
pub fn fits_ground_limit(atoms: usize, worlds: usize, limit: usize) -> bool {
    atoms
        .checked_mul(worlds)
        .and_then(|a| a.checked_add(2 * worlds * worlds))
        .is_some_and(|size| size <= limit)
}

/// Searches structures with 1, 2, ..., `max_worlds` worlds and returns the
/// first model found. Within one world count the first model is the least
/// assignment of: R_d row by row, then R_i, then Skolem choices, then the
/// valuation atom by atom and world by world, with false before true.
pub fn find_countermodel(
    cs: &ClauseSet,
    max_worlds: usize,
    max_ground_atoms: usize,
) -> Result<Option<KripkeCountermodel>, ModelSearchError> {
    let g = ground_if_finite(cs)?;
    let atoms = g.domain_atom_count();
    let far = Instant::now() + Duration::from_secs(60 * 60 * 24 * 365);
    for n in 1..=max_worlds {
        if !fits_ground_limit(atoms, n, max_ground_atoms) {
            return Err(ModelSearchError::GroundingTooLarge {
                atoms,
                worlds: n,
                limit: max_ground_atoms,
            });
        }
        if let Some(m) = search_worlds(&g, n, far).expect("no deadline") {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum WorldFn {
    Skolem(u32),
    Constant(String),
}

impl WorldFn {
    fn of(t: &FoTerm) -> Option<WorldFn> {
        match t {
            FoTerm::SkolemWorld { id, .. } => Some(WorldFn::Skolem(*id)),
            FoTerm::World { symbol } if symbol != ACTUAL_WORLD => {
                Some(WorldFn::Constant(symbol.clone()))
            }
            _ => None,
        }
    }

    fn name(&self) -> String {
        match self {
            WorldFn::Skolem(id) => FoTerm::SkolemWorld {
                id: *id,
                args: vec![],
            }
            .to_string(),
            WorldFn::Constant(s) => s.clone(),
        }
    }
}

fn arg_sort(t: &FoTerm) -> Sort {
    t.sort()
}

/// Iterates the mixed-radix tuples over `sizes`, last position fastest.
fn for_each_mixed(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.iter().any(|&s| s == 0) {
        return;
    }
    let mut t = vec![0usize; sizes.len()];
    loop {
        f(&t);
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < sizes[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

fn mixed_index(sizes: &[usize], tuple: &[usize]) -> usize {
    sizes.iter().zip(tuple).fold(0, |acc, (&s, &x)| acc * s + x)
}

struct Encoding<'g> {
    n: usize,
    individuals: &'g [FoTerm],
    fns: Vec<(WorldFn, Vec<Sort>)>,
    fn_index: HashMap<WorldFn, usize>,
    fn_base: Vec<u32>,
    atoms: Vec<(String, Vec<FoTerm>)>,
    atom_index: HashMap<(String, Vec<FoTerm>), usize>,
    val_base: u32,
    nvars: usize,
}

impl<'g> Encoding<'g> {
    fn new(g: &'g Grounding, n: usize) -> Self {
        let mut fns: BTreeMap<WorldFn, Vec<Sort>> = BTreeMap::new();
        let mut atoms: BTreeSet<(String, Vec<FoTerm>)> = BTreeSet::new();
        fn walk(t: &FoTerm, fns: &mut BTreeMap<WorldFn, Vec<Sort>>) {
            if let Some(f) = WorldFn::of(t) {
                fns.entry(f)
                    .or_insert_with(|| t.args().iter().map(arg_sort).collect());
            }
            t.args().iter().for_each(|a| walk(a, fns));
        }
        for c in &g.clauses.clauses {
            for l in &c.literals {
                l.atom.terms().into_iter().for_each(|t| walk(t, &mut fns));
                if let FoAtom::Pred {
                    predicate, args, ..
                } = &l.atom
                {
                    atoms.insert((predicate.clone(), args.clone()));
                }
            }
        }
        let mut next = (2 * n * n) as u32;
        let fns: Vec<(WorldFn, Vec<Sort>)> = fns.into_iter().collect();
        let mut fn_base = Vec::new();
        for (_, sorts) in &fns {
            fn_base.push(next);
            let tuples: usize = sorts
                .iter()
                .map(|s| match s {
                    Sort::World => n,
                    Sort::Individual => g.individuals.len(),
                })
                .product();
            next += (tuples * n) as u32;
        }
        let atoms: Vec<_> = atoms.into_iter().collect();
        let val_base = next;
        Encoding {
            n,
            individuals: &g.individuals,
            fn_index: fns.iter().enumerate().map(|(i, (f, _))| (f.clone(), i)).collect(),
            fns,
            fn_base,
            atom_index: atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect(),
            nvars: val_base as usize + atoms.len() * n,
            atoms,
            val_base,
        }
    }

    fn access(&self, m: Modality, i: usize, j: usize) -> u32 {
        let base = match m {
            Modality::Deontic => 0,
            Modality::Ideal => self.n * self.n,
        };
        (base + i * self.n + j) as u32
    }

    fn domain_sizes(&self, f: usize) -> Vec<usize> {
        self.fns[f]
            .1
            .iter()
            .map(|s| match s {
                Sort::World => self.n,
                Sort::Individual => self.individuals.len(),
            })
            .collect()
    }

    fn choice(&self, f: usize, tuple: &[usize], value: usize) -> u32 {
        let idx = mixed_index(&self.domain_sizes(f), tuple);
        self.fn_base[f] + (idx * self.n + value) as u32
    }

    fn valuation(&self, atom: usize, w: usize) -> u32 {
        self.val_base + (atom * self.n + w) as u32
    }

    fn individual(&self, t: &FoTerm) -> usize {
        self.individuals
            .iter()
            .position(|i| i == t)
            .expect("grounded individual is in the universe")
    }

    fn encode(&self, g: &Grounding) -> Solver {
        let n = self.n;
        let mut s = Solver::new(self.nvars);
        for m in Modality::ALL {
            for i in 0..n {
                s.add((0..n).map(|j| pos(self.access(m, i, j))).collect());
            }
        }
        for f in 0..self.fns.len() {
            for_each_mixed(&self.domain_sizes(f), |tuple| {
                s.add((0..n).map(|v| pos(self.choice(f, tuple, v))).collect());
            });
        }
        for c in &g.clauses.clauses {
            self.encode_clause(c, &mut s);
        }
        s
    }

    fn encode_clause(&self, c: &Clause, s: &mut Solver) {
        let n = self.n;
        let vars: Vec<Var> = c.variables();
        debug_assert!(vars.iter().all(|v| v.sort == Sort::World));
        // Distinct world-function subterms, children before parents.
        let mut subterms: Vec<&FoTerm> = Vec::new();
        fn collect<'t>(t: &'t FoTerm, out: &mut Vec<&'t FoTerm>) {
            t.args().iter().for_each(|a| collect(a, out));
            if WorldFn::of(t).is_some() && !out.contains(&t) {
                out.push(t);
            }
        }
        for l in &c.literals {
            l.atom.terms().into_iter().for_each(|t| collect(t, &mut subterms));
        }
        let sizes = vec![n; vars.len() + subterms.len()];
        for_each_mixed(&sizes, |assignment| {
            let (env, values) = assignment.split_at(vars.len());
            let world = |t: &FoTerm| -> usize {
                match t {
                    FoTerm::Var { var } => env[vars.iter().position(|v| v == var).unwrap()],
                    FoTerm::World { symbol } if symbol == ACTUAL_WORLD => 0,
                    _ => values[subterms.iter().position(|u| *u == t).unwrap()],
                }
            };
            let mut lits: Vec<Lit> = Vec::new();
            for (k, t) in subterms.iter().enumerate() {
                let f = self.fn_index[&WorldFn::of(t).unwrap()];
                let tuple: Vec<usize> = t
                    .args()
                    .iter()
                    .map(|a| match a.sort() {
                        Sort::World => world(a),
                        Sort::Individual => self.individual(a),
                    })
                    .collect();
                lits.push(neg(self.choice(f, &tuple, values[k])));
            }
            for l in &c.literals {
                let v = match &l.atom {
                    FoAtom::Pred {
                        predicate,
                        args,
                        world: w,
                    } => {
                        let a = self.atom_index[&(predicate.clone(), args.clone())];
                        self.valuation(a, world(w))
                    }
                    FoAtom::Access { modality, from, to } => {
                        self.access(*modality, world(from), world(to))
                    }
                };
                lits.push(if l.positive { pos(v) } else { neg(v) });
            }
            s.add(lits);
        });
    }

    fn decode(&self, bits: &[bool]) -> KripkeCountermodel {
        let n = self.n;
        let rel = |m| {
            let mut out = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if bits[self.access(m, i, j) as usize] {
                        out.push((i, j));
                    }
                }
            }
            out
        };
        let mut skolem = Vec::new();
        for (f, (name, sorts)) in self.fns.iter().enumerate() {
            for_each_mixed(&self.domain_sizes(f), |tuple| {
                let value = (0..n)
                    .find(|&v| bits[self.choice(f, tuple, v) as usize])
                    .expect("totality clause");
                let args = tuple
                    .iter()
                    .zip(sorts)
                    .map(|(&x, s)| match s {
                        Sort::World => Element::World { index: x },
                        Sort::Individual => Element::Individual {
                            term: self.individuals[x].clone(),
                        },
                    })
                    .collect();
                skolem.push(SkolemValue {
                    function: name.name(),
                    args,
                    value,
                });
            });
        }
        let valuation = self
            .atoms
            .iter()
            .enumerate()
            .map(|(a, (predicate, args))| AtomValuation {
                predicate: predicate.clone(),
                args: args.clone(),
                true_at: (0..n).filter(|&w| bits[self.valuation(a, w) as usize]).collect(),
            })
            .collect();
        KripkeCountermodel {
            worlds: n,
            actual: 0,
            r_d: rel(Modality::Deontic),
            r_i: rel(Modality::Ideal),
            individuals: self.individuals.to_vec(),
            valuation,
            skolem,
        }
    }
}

/// Model search with exactly `n` worlds.
pub(crate) fn search_worlds(
    g: &Grounding,
    n: usize,
    deadline: Instant,
) -> Result<Option<KripkeCountermodel>, Timeout> {
    let enc = Encoding::new(g, n);
    let solver = enc.encode(g);
    Ok(solver.solve(deadline)?.map(|bits| enc.decode(&bits)))
}

struct Interpretation<'m> {
    m: &'m KripkeCountermodel,
    access: HashSet<(Modality, usize, usize)>,
    truth: HashSet<(&'m str, &'m [FoTerm], usize)>,
    skolem: HashMap<(&'m str, &'m [Element]), usize>,
}

impl<'m> Interpretation<'m> {
    fn new(m: &'m KripkeCountermodel) -> Self {
        let mut access = HashSet::new();
        for md in Modality::ALL {
            for &(a, b) in m.relation(md) {
                access.insert((md, a, b));
            }
        }
        let mut truth = HashSet::new();
        for a in &m.valuation {
            for &w in &a.true_at {
                truth.insert((a.predicate.as_str(), a.args.as_slice(), w));
            }
        }
        let skolem = m
            .skolem
            .iter()
            .map(|s| ((s.function.as_str(), s.args.as_slice()), s.value))
            .collect();
        Interpretation {
            m,
            access,
            truth,
            skolem,
        }
    }

    fn eval(&self, t: &FoTerm, env: &HashMap<&Var, Element>) -> Option<Element> {
        match t {
            FoTerm::Var { var } => env.get(var).cloned(),
            FoTerm::World { symbol } if symbol == ACTUAL_WORLD => Some(Element::World {
                index: self.m.actual,
            }),
            FoTerm::World { .. } | FoTerm::SkolemWorld { .. } => {
                let args: Vec<Element> = t
                    .args()
                    .iter()
                    .map(|a| self.eval(a, env))
                    .collect::<Option<_>>()?;
                let name = WorldFn::of(t)?.name();
                let v = *self.skolem.get(&(name.as_str(), args.as_slice()))?;
                (v < self.m.worlds).then_some(Element::World { index: v })
            }
            FoTerm::Fn { .. } | FoTerm::SkolemInd { .. } => self
                .m
                .individuals
                .contains(t)
                .then(|| Element::Individual { term: t.clone() }),
        }
    }

    fn literal(&self, l: &FoLiteral, env: &HashMap<&Var, Element>) -> Option<bool> {
        let world = |t: &FoTerm| match self.eval(t, env)? {
            Element::World { index } => Some(index),
            Element::Individual { .. } => None,
        };
        let value = match &l.atom {
            FoAtom::Pred {
                predicate,
                args,
                world: w,
            } => {
                let args: Vec<FoTerm> = args
                    .iter()
                    .map(|a| match self.eval(a, env)? {
                        Element::Individual { term } => Some(term),
                        Element::World { .. } => None,
                    })
                    .collect::<Option<_>>()?;
                self.truth
                    .contains(&(predicate.as_str(), args.as_slice(), world(w)?))
            }
            FoAtom::Access { modality, from, to } => {
                self.access.contains(&(*modality, world(from)?, world(to)?))
            }
        };
        Some(value == l.positive)
    }
}

/// True iff `m` is a well-formed serial structure that satisfies every clause
/// of `cs` under all assignments to its variables.
pub fn check_model(cs: &ClauseSet, m: &KripkeCountermodel) -> bool {
    let in_range = |&(a, b): &(usize, usize)| a < m.worlds && b < m.worlds;
    if m.worlds == 0
        || m.actual >= m.worlds
        || m.individuals.is_empty()
        || !m.r_d.iter().all(in_range)
        || !m.r_i.iter().all(in_range)
        || !m.is_serial()
    {
        return false;
    }
    let interp = Interpretation::new(m);
    cs.clauses.iter().all(|c| {
        let vars = c.variables();
        let sizes: Vec<usize> = vars
            .iter()
            .map(|v| match v.sort {
                Sort::World => m.worlds,
                Sort::Individual => m.individuals.len(),
            })
            .collect();
        let mut ok = true;
        for_each_mixed(&sizes, |tuple| {
            if !ok {
                return;
            }
            let env: HashMap<&Var, Element> = vars
                .iter()
                .zip(tuple)
                .map(|(v, &x)| {
                    let e = match v.sort {
                        Sort::World => Element::World { index: x },
                        Sort::Individual => Element::Individual {
                            term: m.individuals[x].clone(),
                        },
                    };
                    (v, e)
                })
                .collect();
            let sat = c
                .literals
                .iter()
                .map(|l| interp.literal(l, &env))
                .try_fold(false, |acc, v| v.map(|v| acc || v));
            ok = sat == Some(true);
        });
        ok
    })
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::World { index } => write!(f, "#{index}"),
            Element::Individual { term } => write!(f, "{term}"),
        }
    }
}

fn write_pairs(f: &mut fmt::Formatter<'_>, label: &str, pairs: &[(usize, usize)]) -> fmt::Result {
    f.write_str(label)?;
    for (a, b) in pairs {
        write!(f, " {a}->{b}")?;
    }
    writeln!(f)
}

/// Line-oriented rendering, one fact per line.
impl fmt::Display for KripkeCountermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds {}", self.worlds)?;
        writeln!(f, "actual {}", self.actual)?;
        write_pairs(f, "r_d", &self.r_d)?;
        write_pairs(f, "r_i", &self.r_i)?;
        f.write_str("individuals")?;
        for i in &self.individuals {
            write!(f, " {i}")?;
        }
        writeln!(f)?;
        for s in &self.skolem {
            f.write_str(&s.function)?;
            if !s.args.is_empty() {
                let args: Vec<String> = s.args.iter().map(ToString::to_string).collect();
                write!(f, "({})", args.join(", "))?;
            }
            writeln!(f, " = #{}", s.value)?;
        }
        for a in &self.valuation {
            let atom = if a.args.is_empty() {
                a.predicate.clone()
            } else {
                let args: Vec<String> = a.args.iter().map(ToString::to_string).collect();
                format!("{}({})", a.predicate, args.join(", "))
            };
            write!(f, "atom {atom} true at")?;
            if a.true_at.is_empty() {
                f.write_str(" none")?;
            }
            for w in &a.true_at {
                write!(f, " #{w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
