//! Interned clause matrix and a trail-based substitution with structure
//! sharing: a term instance is a node plus the variable offset of the clause
//! copy it belongs to.

use std::collections::HashMap;

use crate::embedding::{ClauseSet, FoAtom, FoLiteral, FoTerm, Modality, Sort, Var};

pub(crate) type NodeId = u32;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Node {
    Var(u32),
    App { sym: u32, start: u32, len: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Symbol {
    Fn(String),
    SkolemInd(u32),
    World(String),
    SkolemWorld(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum PredSym {
    Domain(String),
    Access(Modality),
}

#[derive(Debug, Clone)]
pub(crate) struct MLit {
    pub positive: bool,
    pub pred: u32,
    pub args: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub(crate) struct MClause {
    pub lits: Vec<MLit>,
    /// Local variable `i` is `vars[i]` of the source clause.
    pub vars: Vec<Var>,
}

#[derive(Debug, Default)]
pub(crate) struct Matrix {
    nodes: Vec<Node>,
    args: Vec<NodeId>,
    symbols: Vec<Symbol>,
    sym_index: HashMap<(Symbol, u32), u32>,
    preds: Vec<PredSym>,
    pred_index: HashMap<(PredSym, usize), u32>,
    var_nodes: Vec<Vec<NodeId>>,
    pub clauses: Vec<MClause>,
}

impl Matrix {
    pub fn new(cs: &ClauseSet) -> Self {
        let mut m = Matrix::default();
        for c in &cs.clauses {
            let vars = c.variables();
            let var_nodes = (0..vars.len() as u32)
                .map(|l| {
                    m.nodes.push(Node::Var(l));
                    (m.nodes.len() - 1) as NodeId
                })
                .collect();
            m.var_nodes.push(var_nodes);
            let lits = c
                .literals
                .iter()
                .map(|l| m.intern_literal(l, &vars))
                .collect();
            m.clauses.push(MClause { lits, vars });
        }
        m
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    /// A node standing for local variable `i` of clause `c`.
    pub fn var_node(&self, c: usize, i: usize) -> NodeId {
        self.var_nodes[c][i]
    }

    pub fn app_args(&self, start: u32, len: u32) -> &[NodeId] {
        &self.args[start as usize..(start + len) as usize]
    }

    fn intern_literal(&mut self, l: &FoLiteral, vars: &[Var]) -> MLit {
        let (key, terms): (PredSym, Vec<&FoTerm>) = match &l.atom {
            FoAtom::Pred { predicate, .. } => (PredSym::Domain(predicate.clone()), l.atom.terms()),
            FoAtom::Access { modality, .. } => (PredSym::Access(*modality), l.atom.terms()),
        };
        let next = self.preds.len() as u32;
        let pred = *self
            .pred_index
            .entry((key.clone(), terms.len()))
            .or_insert_with(|| {
                self.preds.push(key);
                next
            });
        let args = terms.into_iter().map(|t| self.intern_term(t, vars)).collect();
        MLit {
            positive: l.positive,
            pred,
            args,
        }
    }

    fn intern_term(&mut self, t: &FoTerm, vars: &[Var]) -> NodeId {
        let node = match t {
            FoTerm::Var { var } => {
                let local = vars.iter().position(|v| v == var).expect("clause variable");
                Node::Var(local as u32)
            }
            _ => {
                let sym = match t {
                    FoTerm::Fn { symbol, .. } => Symbol::Fn(symbol.clone()),
                    FoTerm::SkolemInd { id, .. } => Symbol::SkolemInd(*id),
                    FoTerm::World { symbol } => Symbol::World(symbol.clone()),
                    FoTerm::SkolemWorld { id, .. } => Symbol::SkolemWorld(*id),
                    FoTerm::Var { .. } => unreachable!(),
                };
                let children: Vec<NodeId> =
                    t.args().iter().map(|a| self.intern_term(a, vars)).collect();
                let len = children.len() as u32;
                let next = self.symbols.len() as u32;
                let sym = *self.sym_index.entry((sym.clone(), len)).or_insert_with(|| {
                    self.symbols.push(sym);
                    next
                });
                let start = self.args.len() as u32;
                self.args.extend(children);
                Node::App { sym, start, len }
            }
        };
        self.nodes.push(node);
        (self.nodes.len() - 1) as NodeId
    }
}

/// Trail-based substitution over clause copies.
#[derive(Debug, Default)]
pub(crate) struct Subst {
    val: Vec<Option<(NodeId, u32)>>,
    sorts: Vec<Sort>,
    trail: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Mark {
    trail: usize,
    vars: usize,
}

enum Deref {
    Var(u32),
    App { sym: u32, start: u32, len: u32, off: u32 },
}

impl Subst {
    pub fn mark(&self) -> Mark {
        Mark {
            trail: self.trail.len(),
            vars: self.val.len(),
        }
    }

    pub fn undo(&mut self, mark: Mark) {
        for g in self.trail.drain(mark.trail..) {
            self.val[g as usize] = None;
        }
        self.val.truncate(mark.vars);
        self.sorts.truncate(mark.vars);
    }

    /// Allocates variables for a fresh copy of `c` and returns its offset.
    pub fn fresh(&mut self, c: &MClause) -> u32 {
        let off = self.val.len() as u32;
        for v in &c.vars {
            self.val.push(None);
            self.sorts.push(v.sort);
        }
        off
    }

    fn deref(&self, m: &Matrix, mut n: NodeId, mut off: u32) -> Deref {
        loop {
            match m.node(n) {
                Node::Var(l) => {
                    let g = off + l;
                    match self.val[g as usize] {
                        Some((n2, o2)) => {
                            n = n2;
                            off = o2;
                        }
                        None => return Deref::Var(g),
                    }
                }
                Node::App { sym, start, len } => return Deref::App { sym, start, len, off },
            }
        }
    }

    fn occurs(&self, m: &Matrix, g: u32, n: NodeId, off: u32) -> bool {
        match self.deref(m, n, off) {
            Deref::Var(h) => g == h,
            Deref::App { start, len, off, .. } => m
                .app_args(start, len)
                .iter()
                .any(|&a| self.occurs(m, g, a, off)),
        }
    }

    fn bind(&mut self, g: u32, n: NodeId, off: u32) {
        self.val[g as usize] = Some((n, off));
        self.trail.push(g);
    }

    /// Unifies two term instances with occurs check. Leaves partial bindings
    /// on failure; callers undo to a mark.
    pub fn unify(&mut self, m: &Matrix, a: (NodeId, u32), b: (NodeId, u32)) -> bool {
        let mut stack = vec![(a, b)];
        while let Some(((an, ao), (bn, bo))) = stack.pop() {
            match (self.deref(m, an, ao), self.deref(m, bn, bo)) {
                (Deref::Var(x), Deref::Var(y)) if x == y => {}
                (Deref::Var(x), _) => {
                    if self.occurs(m, x, bn, bo) {
                        return false;
                    }
                    self.bind(x, bn, bo);
                }
                (_, Deref::Var(y)) => {
                    if self.occurs(m, y, an, ao) {
                        return false;
                    }
                    self.bind(y, an, ao);
                }
                (
                    Deref::App { sym: s1, start: st1, len: l1, off: o1 },
                    Deref::App { sym: s2, start: st2, len: l2, off: o2 },
                ) => {
                    if s1 != s2 || l1 != l2 {
                        return false;
                    }
                    for (&x, &y) in m.app_args(st1, l1).iter().zip(m.app_args(st2, l2)) {
                        stack.push(((x, o1), (y, o2)));
                    }
                }
            }
        }
        true
    }

    pub fn unify_args(&mut self, m: &Matrix, a: &[NodeId], ao: u32, b: &[NodeId], bo: u32) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(&x, &y)| self.unify(m, (x, ao), (y, bo)))
    }

    /// Syntactic identity under the current bindings.
    pub fn identical(&self, m: &Matrix, a: (NodeId, u32), b: (NodeId, u32)) -> bool {
        match (self.deref(m, a.0, a.1), self.deref(m, b.0, b.1)) {
            (Deref::Var(x), Deref::Var(y)) => x == y,
            (
                Deref::App { sym: s1, start: st1, len: l1, off: o1 },
                Deref::App { sym: s2, start: st2, len: l2, off: o2 },
            ) => {
                s1 == s2
                    && l1 == l2
                    && m.app_args(st1, l1)
                        .iter()
                        .zip(m.app_args(st2, l2))
                        .all(|(&x, &y)| self.identical(m, (x, o1), (y, o2)))
            }
            _ => false,
        }
    }

    /// Fully instantiated first-order term. Unbound copy variables are named
    /// `X_<n>` or `W_<n>` by sort.
    pub fn to_term(&self, m: &Matrix, n: NodeId, off: u32) -> FoTerm {
        match self.deref(m, n, off) {
            Deref::Var(g) => FoTerm::var(match self.sorts[g as usize] {
                Sort::Individual => Var::individual(format!("X_{g}")),
                Sort::World => Var::world(format!("W_{g}")),
            }),
            Deref::App { sym, start, len, off } => {
                let args: Vec<FoTerm> = m
                    .app_args(start, len)
                    .iter()
                    .map(|&a| self.to_term(m, a, off))
                    .collect();
                match &m.symbols[sym as usize] {
                    Symbol::Fn(s) => FoTerm::Fn {
                        symbol: s.clone(),
                        args,
                    },
                    Symbol::SkolemInd(id) => FoTerm::SkolemInd { id: *id, args },
                    Symbol::World(s) => FoTerm::World { symbol: s.clone() },
                    Symbol::SkolemWorld(id) => FoTerm::SkolemWorld { id: *id, args },
                }
            }
        }
    }

    pub fn to_literal(&self, m: &Matrix, l: &MLit, off: u32) -> FoLiteral {
        let mut terms: Vec<FoTerm> = l.args.iter().map(|&a| self.to_term(m, a, off)).collect();
        let atom = match &m.preds[l.pred as usize] {
            PredSym::Domain(p) => {
                let world = terms.pop().expect("world argument");
                FoAtom::Pred {
                    predicate: p.clone(),
                    args: terms,
                    world,
                }
            }
            PredSym::Access(modality) => {
                let to = terms.pop().expect("two arguments");
                let from = terms.pop().expect("two arguments");
                FoAtom::Access {
                    modality: *modality,
                    from,
                    to,
                }
            }
        };
        FoLiteral {
            positive: l.positive,
            atom,
        }
    }
}
