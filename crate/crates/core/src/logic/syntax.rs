use std::collections::BTreeSet;
use std::fmt;

/// A first-order term: a variable or a function symbol applied to arguments.
///
/// Constants are applications with no arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

/// An atomic formula `p(t1, ..., tn)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }
}

/// The three conditional deontic arrows and the four monadic operators share
/// one enum each so that traversals can treat them uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeonticOp {
    Ob,
    Pm,
    Fb,
}

impl DeonticOp {
    pub fn keyword(self) -> &'static str {
        match self {
            DeonticOp::Ob => "Ob",
            DeonticOp::Pm => "Pm",
            DeonticOp::Fb => "Fb",
        }
    }
}

/// A formula of the deontic first-order language.
///
/// There are no explicit quantifiers: free variables are read as universally
/// quantified at top level (see [`ClosedFormula`](super::ClosedFormula)).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Id(Box<Formula>),
    Ob(Box<Formula>),
    Pm(Box<Formula>),
    Fb(Box<Formula>),
    CondOb(Box<Formula>, Box<Formula>),
    CondPm(Box<Formula>, Box<Formula>),
    CondFb(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(predicate, args))
    }

    /// A nullary atom.
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::atom(name, Vec::new())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn id(f: Formula) -> Self {
        Formula::Id(Box::new(f))
    }

    pub fn ob(f: Formula) -> Self {
        Formula::Ob(Box::new(f))
    }

    pub fn pm(f: Formula) -> Self {
        Formula::Pm(Box::new(f))
    }

    pub fn fb(f: Formula) -> Self {
        Formula::Fb(Box::new(f))
    }

    pub fn cond(op: DeonticOp, l: Formula, r: Formula) -> Self {
        let (l, r) = (Box::new(l), Box::new(r));
        match op {
            DeonticOp::Ob => Formula::CondOb(l, r),
            DeonticOp::Pm => Formula::CondPm(l, r),
            DeonticOp::Fb => Formula::CondFb(l, r),
        }
    }

    /// Variables in order of first occurrence (left to right).
    pub fn variables_in_order(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk_atoms(&mut |a| a.args.iter().for_each(|t| t.collect_vars(&mut out)));
        out.into_iter().map(str::to_owned).collect()
    }

    /// All variables occurring in the formula. There are no binders in the
    /// syntax, so every occurrence is free.
    pub fn free_variables(&self) -> BTreeSet<String> {
        self.variables_in_order().into_iter().collect()
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.walk_atoms(&mut |a| ground &= a.args.iter().all(Term::is_ground));
        ground
    }

    /// Calls `f` on every atom, left to right.
    pub fn walk_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(g) | Formula::Id(g) | Formula::Ob(g) | Formula::Pm(g) | Formula::Fb(g) => {
                g.walk_atoms(f)
            }
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::CondOb(l, r)
            | Formula::CondPm(l, r)
            | Formula::CondFb(l, r) => {
                l.walk_atoms(f);
                r.walk_atoms(f);
            }
        }
    }

    /// Maximum nesting of modal operators (conditional arrows count once).
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(g) => g.modal_depth(),
            Formula::Id(g) | Formula::Ob(g) | Formula::Pm(g) | Formula::Fb(g) => 1 + g.modal_depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.modal_depth().max(r.modal_depth())
            }
            Formula::CondOb(l, r) | Formula::CondPm(l, r) | Formula::CondFb(l, r) => {
                l.modal_depth().max(1 + r.modal_depth())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        write_args(f, &self.args)
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}
