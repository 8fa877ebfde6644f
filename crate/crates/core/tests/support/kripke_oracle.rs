//! Reference semantics for ground deontic formulas, evaluated directly on
//! finite serial Kripke structures. Shares nothing with the embedding or the
//! prover beyond the formula syntax.

#![allow(dead_code)]

use std::collections::BTreeSet;

use deontix_core::logic::{Atom, Formula};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum K {
    F,
    U,
    T,
}

impl K {
    fn not(self) -> K {
        match self {
            K::F => K::T,
            K::U => K::U,
            K::T => K::F,
        }
    }

    fn and(self, o: K) -> K {
        match (self, o) {
            (K::F, _) | (_, K::F) => K::F,
            (K::T, K::T) => K::T,
            _ => K::U,
        }
    }

    fn or(self, o: K) -> K {
        self.not().and(o.not()).not()
    }

    fn of(b: Option<bool>) -> K {
        match b {
            None => K::U,
            Some(true) => K::T,
            Some(false) => K::F,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rel {
    D,
    I,
}

/// A finite structure: worlds `0..n`, world 0 actual.
#[derive(Debug, Clone)]
pub struct Structure {
    pub n: usize,
    pub atoms: Vec<String>,
    /// All valuation bits (world-major), then for each world its R_d row
    /// followed by its R_i row. Assigned in this order during search, so
    /// every box body is definite before any accessibility bit is chosen.
    bits: Vec<Option<bool>>,
}

impl Structure {
    fn val_bits(&self) -> usize {
        self.n * self.atoms.len()
    }

    fn val(&self, a: usize, w: usize) -> Option<bool> {
        self.bits[w * self.atoms.len() + a]
    }

    fn rel(&self, r: Rel, w: usize, v: usize) -> Option<bool> {
        let row = 2 * w + usize::from(r == Rel::I);
        self.bits[self.val_bits() + row * self.n + v]
    }

    pub fn access(&self, deontic: bool, w: usize, v: usize) -> bool {
        self.rel(if deontic { Rel::D } else { Rel::I }, w, v) == Some(true)
    }

    pub fn holds_atom(&self, name: &str, w: usize) -> bool {
        let a = self.atoms.iter().position(|x| x == name).expect("atom");
        self.val(a, w) == Some(true)
    }

    fn eval(&self, f: &Formula, w: usize) -> K {
        // Only serial completions are ever explored, so a box whose body is
        // false at every world not yet excluded from the row is false.
        let boxed = |r: Rel, g: &dyn Fn(usize) -> K| {
            let mut value = K::T;
            let mut open_false = true;
            for v in 0..self.n {
                let edge = K::of(self.rel(r, w, v));
                if edge == K::F {
                    continue;
                }
                let body = g(v);
                open_false &= body == K::F;
                value = value.and(edge.not().or(body));
            }
            if open_false {
                K::F
            } else {
                value
            }
        };
        match f {
            Formula::Atom(a) => {
                let i = self.atoms.iter().position(|x| *x == a.predicate).expect("atom");
                K::of(self.val(i, w))
            }
            Formula::Not(g) => self.eval(g, w).not(),
            Formula::And(l, r) => self.eval(l, w).and(self.eval(r, w)),
            Formula::Or(l, r) => self.eval(l, w).or(self.eval(r, w)),
            Formula::Implies(l, r) => self.eval(l, w).not().or(self.eval(r, w)),
            Formula::Id(g) => boxed(Rel::I, &|v| self.eval(g, v)),
            Formula::Ob(g) => boxed(Rel::D, &|v| self.eval(g, v)),
            Formula::Fb(g) => boxed(Rel::D, &|v| self.eval(g, v).not()),
            Formula::Pm(g) => boxed(Rel::D, &|v| self.eval(g, v).not()).not(),
            Formula::CondOb(l, r) => self.eval(l, w).not().or(self.eval(&Formula::ob((**r).clone()), w)),
            Formula::CondPm(l, r) => self.eval(l, w).not().or(self.eval(&Formula::pm((**r).clone()), w)),
            Formula::CondFb(l, r) => self.eval(l, w).not().or(self.eval(&Formula::fb((**r).clone()), w)),
        }
    }

    /// Two-valued truth on a complete structure.
    pub fn holds(&self, f: &Formula, w: usize) -> bool {
        assert!(self.bits.iter().all(Option::is_some));
        self.eval(f, w) == K::T
    }

    pub fn is_serial(&self) -> bool {
        (0..self.n).all(|w| {
            [Rel::D, Rel::I]
                .iter()
                .all(|&r| (0..self.n).any(|v| self.rel(r, w, v) == Some(true)))
        })
    }

    /// Uniformly random serial structure.
    pub fn random(rng: &mut impl Rng, atoms: Vec<String>, n: usize) -> Structure {
        let mut s = Structure {
            n,
            bits: vec![None; n * (atoms.len() + 2 * n)],
            atoms,
        };
        loop {
            for b in s.bits.iter_mut() {
                *b = Some(rng.gen_bool(0.5));
            }
            if s.is_serial() {
                return s;
            }
        }
    }

    /// True when `bit` completes an accessibility row with no successor.
    fn row_dead(&self, bit: usize) -> bool {
        let Some(k) = bit.checked_sub(self.val_bits()) else {
            return false;
        };
        let start = self.val_bits() + k / self.n * self.n;
        k % self.n == self.n - 1 && self.bits[start..start + self.n].iter().all(|b| *b == Some(false))
    }

    /// Fills unassigned bits: accessibility true, valuation false. Keeps
    /// rows serial; definite formula values are unaffected.
    fn complete(&mut self) {
        let split = self.val_bits();
        for (i, b) in self.bits.iter_mut().enumerate() {
            if b.is_none() {
                *b = Some(i >= split);
            }
        }
    }
}

pub fn atoms_of(f: &Formula) -> Vec<String> {
    let mut out = BTreeSet::new();
    f.walk_atoms(&mut |a: &Atom| {
        assert!(a.args.is_empty(), "oracle handles propositional formulas only");
        out.insert(a.predicate.clone());
    });
    out.into_iter().collect()
}

fn search(s: &mut Structure, f: &Formula, next: usize) -> bool {
    match s.eval(f, 0) {
        K::T => return false,
        K::F => {
            s.complete();
            return true;
        }
        K::U => {}
    }
    if next == s.bits.len() {
        return false;
    }
    for value in [false, true] {
        s.bits[next] = Some(value);
        if !s.row_dead(next) && search(s, f, next + 1) {
            return true;
        }
    }
    s.bits[next] = None;
    false
}

/// A serial structure with at most `max_worlds` worlds falsifying `f` at
/// world 0, trying smaller sizes first.
pub fn countermodel(f: &Formula, max_worlds: usize) -> Option<Structure> {
    let atoms = atoms_of(f);
    (1..=max_worlds).find_map(|n| {
        let mut s = Structure {
            n,
            bits: vec![None; n * (atoms.len() + 2 * n)],
            atoms: atoms.clone(),
        };
        search(&mut s, f, 0).then_some(s)
    })
}

pub fn is_valid(f: &Formula, max_worlds: usize) -> bool {
    countermodel(f, max_worlds).is_none()
}

/// Validity over serial structures of at most `max_worlds` worlds, searching
/// only up to the tableau bound when that is smaller. Any countermodel
/// implies one within the bound, so the answer is the same.
pub fn is_valid_bounded(f: &Formula, max_worlds: usize) -> bool {
    is_valid(f, max_worlds.min(tree_model_bound(f)))
}

/// Negation normal form over the two boxes and their duals.
#[derive(Debug, Clone)]
enum Nnf {
    Lit,
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Boxed(Rel, Box<Nnf>),
    Dia(Rel, Box<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    let bx = |r, g: &Formula, p: bool| {
        if positive {
            Nnf::Boxed(r, Box::new(nnf(g, p)))
        } else {
            Nnf::Dia(r, Box::new(nnf(g, !p)))
        }
    };
    let bin = |l: Nnf, r: Nnf, conj: bool| {
        if conj {
            Nnf::And(Box::new(l), Box::new(r))
        } else {
            Nnf::Or(Box::new(l), Box::new(r))
        }
    };
    match f {
        Formula::Atom(_) => Nnf::Lit,
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(l, r) => bin(nnf(l, positive), nnf(r, positive), positive),
        Formula::Or(l, r) => bin(nnf(l, positive), nnf(r, positive), !positive),
        Formula::Implies(l, r) => bin(nnf(l, !positive), nnf(r, positive), !positive),
        Formula::Id(g) => bx(Rel::I, g, true),
        Formula::Ob(g) => bx(Rel::D, g, true),
        Formula::Fb(g) => bx(Rel::D, g, false),
        Formula::Pm(g) => nnf(&Formula::not(Formula::fb((**g).clone())), positive),
        Formula::CondOb(l, r) => nnf(&Formula::implies((**l).clone(), Formula::ob((**r).clone())), positive),
        Formula::CondPm(l, r) => nnf(&Formula::implies((**l).clone(), Formula::pm((**r).clone())), positive),
        Formula::CondFb(l, r) => nnf(&Formula::implies((**l).clone(), Formula::fb((**r).clone())), positive),
    }
}

fn modal_parts<'a>(f: &'a Nnf, boxes: &mut Vec<(Rel, &'a Nnf)>, dias: &mut Vec<(Rel, &'a Nnf)>) {
    match f {
        Nnf::Lit => {}
        Nnf::And(l, r) | Nnf::Or(l, r) => {
            modal_parts(l, boxes, dias);
            modal_parts(r, boxes, dias);
        }
        Nnf::Boxed(r, g) => boxes.push((*r, g)),
        Nnf::Dia(r, g) => dias.push((*r, g)),
    }
}

fn bound(parts: &[&Nnf]) -> usize {
    let (mut boxes, mut dias) = (Vec::new(), Vec::new());
    for p in parts {
        modal_parts(p, &mut boxes, &mut dias);
    }
    let mut total = 1;
    for r in [Rel::D, Rel::I] {
        let b: Vec<&Nnf> = boxes.iter().filter(|x| x.0 == r).map(|x| x.1).collect();
        let d: Vec<&Nnf> = dias.iter().filter(|x| x.0 == r).map(|x| x.1).collect();
        let successors = if !d.is_empty() { d.len() } else { usize::from(!b.is_empty()) };
        if successors > 0 {
            let content: Vec<&Nnf> = b.iter().chain(d.iter()).copied().collect();
            total += successors * bound(&content);
        }
    }
    total
}

/// Upper bound on the size of a tableau model of `!f`: when `f` is not valid,
/// some countermodel has at most this many worlds.
pub fn tree_model_bound(f: &Formula) -> usize {
    bound(&[&nnf(f, false)])
}

/// Random ground formula over the first `atoms` of p, q, r, s with modal
/// depth at most `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: usize, depth: usize, size: usize) -> Formula {
    const NAMES: [&str; 4] = ["p", "q", "r", "s"];
    if size <= 1 {
        return Formula::prop(NAMES[rng.gen_range(0..atoms)]);
    }
    let modal = depth > 0;
    let choice = rng.gen_range(0..if modal { 14 } else { 5 });
    let sub = |rng: &mut R, d| random_formula(rng, atoms, d, size - 1);
    let split = |rng: &mut R| {
        let l = rng.gen_range(1..size);
        (l, size - l)
    };
    match choice {
        0 => Formula::not(sub(rng, depth)),
        1..=4 => {
            let (a, b) = split(rng);
            let l = random_formula(rng, atoms, depth, a);
            let r = random_formula(rng, atoms, depth, b);
            match choice {
                1 => Formula::and(l, r),
                2 => Formula::or(l, r),
                _ => Formula::implies(l, r),
            }
        }
        5 | 6 => Formula::ob(sub(rng, depth - 1)),
        7 => Formula::pm(sub(rng, depth - 1)),
        8 => Formula::fb(sub(rng, depth - 1)),
        9 => Formula::id(sub(rng, depth - 1)),
        _ => {
            let (a, b) = split(rng);
            let l = random_formula(rng, atoms, depth, a);
            let r = random_formula(rng, atoms, depth - 1, b);
            let op = [
                deontix_core::logic::DeonticOp::Ob,
                deontix_core::logic::DeonticOp::Pm,
                deontix_core::logic::DeonticOp::Fb,
            ][(choice - 10) % 3];
            Formula::cond(op, l, r)
        }
    }
}

/// The oracle formula population: ground, at most 4 atoms, modal depth at
/// most 2, and small enough tableau models that 4 worlds decide validity.
pub fn population(seed: u64, count: usize) -> Vec<Formula> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let atoms = rng.gen_range(1..=4);
        let size = rng.gen_range(2..=9);
        let f = random_formula(&mut rng, atoms, 2, size);
        if f.modal_depth() <= 2 && atoms_of(&f).len() <= 4 && tree_model_bound(&f) <= 4 {
            out.push(f);
        }
    }
    out
}
