use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::modal::Modality;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sort {
    Individual,
    World,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn individual(name: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort: Sort::Individual,
        }
    }

    pub fn world(name: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort: Sort::World,
        }
    }
}

/// Two-sorted first-order term. World terms are `Var` of world sort,
/// `World` constants (the actual world `w0`) and `SkolemWorld` applications.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FoTerm {
    Var { var: Var },
    /// Function symbol or constant of the user's signature.
    Fn { symbol: String, args: Vec<FoTerm> },
    /// Skolem function introduced for an individual existential.
    SkolemInd { id: u32, args: Vec<FoTerm> },
    /// Rigid world constant.
    World { symbol: String },
    /// Skolem function introduced for a world existential.
    SkolemWorld { id: u32, args: Vec<FoTerm> },
}

impl FoTerm {
    pub fn var(v: Var) -> Self {
        FoTerm::Var { var: v }
    }

    pub fn actual_world() -> Self {
        FoTerm::World {
            symbol: crate::logic::ACTUAL_WORLD.to_owned(),
        }
    }

    pub fn sort(&self) -> Sort {
        match self {
            FoTerm::Var { var } => var.sort,
            FoTerm::Fn { .. } | FoTerm::SkolemInd { .. } => Sort::Individual,
            FoTerm::World { .. } | FoTerm::SkolemWorld { .. } => Sort::World,
        }
    }

    pub fn args(&self) -> &[FoTerm] {
        match self {
            FoTerm::Fn { args, .. } | FoTerm::SkolemInd { args, .. } | FoTerm::SkolemWorld { args, .. } => args,
            FoTerm::Var { .. } | FoTerm::World { .. } => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            FoTerm::Var { .. } => false,
            _ => self.args().iter().all(FoTerm::is_ground),
        }
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            FoTerm::Var { var } => var == v,
            _ => self.args().iter().any(|a| a.occurs(v)),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            FoTerm::Var { var } => {
                if !out.contains(var) {
                    out.push(var.clone());
                }
            }
            _ => self.args().iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Applies a substitution once (bindings are not chased).
    pub fn substitute(&self, s: &Substitution) -> FoTerm {
        match self {
            FoTerm::Var { var } => s.get(var).cloned().unwrap_or_else(|| self.clone()),
            FoTerm::Fn { symbol, args } => FoTerm::Fn {
                symbol: symbol.clone(),
                args: args.iter().map(|a| a.substitute(s)).collect(),
            },
            FoTerm::SkolemInd { id, args } => FoTerm::SkolemInd {
                id: *id,
                args: args.iter().map(|a| a.substitute(s)).collect(),
            },
            FoTerm::World { .. } => self.clone(),
            FoTerm::SkolemWorld { id, args } => FoTerm::SkolemWorld {
                id: *id,
                args: args.iter().map(|a| a.substitute(s)).collect(),
            },
        }
    }
}

pub type Substitution = BTreeMap<Var, FoTerm>;

/// Atom of the translated language: a domain predicate carrying its world as
/// the last argument, or an accessibility atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FoAtom {
    Pred {
        predicate: String,
        args: Vec<FoTerm>,
        world: FoTerm,
    },
    Access {
        modality: Modality,
        from: FoTerm,
        to: FoTerm,
    },
}

impl FoAtom {
    pub fn substitute(&self, s: &Substitution) -> FoAtom {
        match self {
            FoAtom::Pred {
                predicate,
                args,
                world,
            } => FoAtom::Pred {
                predicate: predicate.clone(),
                args: args.iter().map(|a| a.substitute(s)).collect(),
                world: world.substitute(s),
            },
            FoAtom::Access { modality, from, to } => FoAtom::Access {
                modality: *modality,
                from: from.substitute(s),
                to: to.substitute(s),
            },
        }
    }

    /// All argument terms, world argument last.
    pub fn terms(&self) -> Vec<&FoTerm> {
        match self {
            FoAtom::Pred { args, world, .. } => args.iter().chain(std::iter::once(world)).collect(),
            FoAtom::Access { from, to, .. } => vec![from, to],
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        self.terms().into_iter().for_each(|t| t.collect_vars(out));
    }

    pub fn is_ground(&self) -> bool {
        self.terms().into_iter().all(FoTerm::is_ground)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FoLiteral {
    pub positive: bool,
    pub atom: FoAtom,
}

impl FoLiteral {
    pub fn pos(atom: FoAtom) -> Self {
        FoLiteral {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: FoAtom) -> Self {
        FoLiteral {
            positive: false,
            atom,
        }
    }

    pub fn complement(&self) -> Self {
        FoLiteral {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn substitute(&self, s: &Substitution) -> FoLiteral {
        FoLiteral {
            positive: self.positive,
            atom: self.atom.substitute(s),
        }
    }
}

/// Classical first-order formula over the translated language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoFormula {
    Atom(FoAtom),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Forall(Var, Box<FoFormula>),
    Exists(Var, Box<FoFormula>),
}

impl FoFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FoFormula) -> Self {
        FoFormula::Not(Box::new(f))
    }

    pub fn and(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn forall(v: Var, f: FoFormula) -> Self {
        FoFormula::Forall(v, Box::new(f))
    }

    pub fn exists(v: Var, f: FoFormula) -> Self {
        FoFormula::Exists(v, Box::new(f))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[&FoTerm]) -> fmt::Result {
    if items.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    f.write_str(")")
}

pub(crate) fn skolem_world_name(id: u32) -> String {
    format!("skw_{id}")
}

pub(crate) fn skolem_ind_name(id: u32) -> String {
    format!("skc_{id}")
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoTerm::Var { var } => write!(f, "{var}"),
            FoTerm::World { symbol } => f.write_str(symbol),
            FoTerm::Fn { symbol, args } => {
                f.write_str(symbol)?;
                write_list(f, &args.iter().collect::<Vec<_>>())
            }
            FoTerm::SkolemInd { id, args } => {
                f.write_str(&skolem_ind_name(*id))?;
                write_list(f, &args.iter().collect::<Vec<_>>())
            }
            FoTerm::SkolemWorld { id, args } => {
                f.write_str(&skolem_world_name(*id))?;
                write_list(f, &args.iter().collect::<Vec<_>>())
            }
        }
    }
}

impl fmt::Display for FoAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoAtom::Pred { predicate, .. } => {
                f.write_str(predicate)?;
                write_list(f, &self.terms())
            }
            FoAtom::Access { modality, .. } => {
                f.write_str(modality.access_predicate())?;
                write_list(f, &self.terms())
            }
        }
    }
}

impl fmt::Display for FoLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoFormula::Atom(a) => write!(f, "{a}"),
            FoFormula::Not(g) => write!(f, "~{g}"),
            FoFormula::And(l, r) => write!(f, "({l} & {r})"),
            FoFormula::Or(l, r) => write!(f, "({l} | {r})"),
            FoFormula::Implies(l, r) => write!(f, "({l} => {r})"),
            FoFormula::Forall(v, g) => write!(f, "![{v}]: {g}"),
            FoFormula::Exists(v, g) => write!(f, "?[{v}]: {g}"),
        }
    }
}
