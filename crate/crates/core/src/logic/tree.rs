//! Structured-tree document form of formulas and terms.
//!
//! Every node is an object with a `kind` field; atoms and terms carry
//! `symbol` and `args`, unary nodes a `body`, binary nodes `left` and `right`.

use serde::{Deserialize, Serialize};

use super::syntax::{Atom, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermTree {
    pub kind: String,
    pub symbol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub args: Option<Vec<TermTree>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaTree {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub args: Option<Vec<TermTree>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Box<FormulaTree>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Box<FormulaTree>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<Box<FormulaTree>>,
}

impl FormulaTree {
    fn node(kind: &str) -> Self {
        FormulaTree {
            kind: kind.to_owned(),
            symbol: None,
            args: None,
            left: None,
            right: None,
            body: None,
        }
    }

    fn unary(kind: &str, body: &Formula) -> Self {
        FormulaTree {
            body: Some(Box::new(body.into())),
            ..Self::node(kind)
        }
    }

    fn binary(kind: &str, l: &Formula, r: &Formula) -> Self {
        FormulaTree {
            left: Some(Box::new(l.into())),
            right: Some(Box::new(r.into())),
            ..Self::node(kind)
        }
    }
}

impl From<&Term> for TermTree {
    fn from(t: &Term) -> Self {
        match t {
            Term::Var(v) => TermTree {
                kind: "var".into(),
                symbol: v.clone(),
                args: None,
            },
            Term::App(f, args) => TermTree {
                kind: "app".into(),
                symbol: f.clone(),
                args: Some(args.iter().map(TermTree::from).collect()),
            },
        }
    }
}

impl From<&Formula> for FormulaTree {
    fn from(f: &Formula) -> Self {
        match f {
            Formula::Atom(a) => FormulaTree {
                symbol: Some(a.predicate.clone()),
                args: Some(a.args.iter().map(TermTree::from).collect()),
                ..Self::node("atom")
            },
            Formula::Not(g) => Self::unary("not", g),
            Formula::Id(g) => Self::unary("id", g),
            Formula::Ob(g) => Self::unary("ob", g),
            Formula::Pm(g) => Self::unary("pm", g),
            Formula::Fb(g) => Self::unary("fb", g),
            Formula::And(l, r) => Self::binary("and", l, r),
            Formula::Or(l, r) => Self::binary("or", l, r),
            Formula::Implies(l, r) => Self::binary("implies", l, r),
            Formula::CondOb(l, r) => Self::binary("cond_ob", l, r),
            Formula::CondPm(l, r) => Self::binary("cond_pm", l, r),
            Formula::CondFb(l, r) => Self::binary("cond_fb", l, r),
        }
    }
}

impl From<Formula> for FormulaTree {
    fn from(f: Formula) -> Self {
        FormulaTree::from(&f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed formula tree: {0}")]
pub struct TreeError(pub String);

impl TryFrom<&TermTree> for Term {
    type Error = TreeError;

    fn try_from(t: &TermTree) -> Result<Self, TreeError> {
        match t.kind.as_str() {
            "var" => Ok(Term::Var(t.symbol.clone())),
            "app" => Ok(Term::App(
                t.symbol.clone(),
                t.args
                    .iter()
                    .flatten()
                    .map(Term::try_from)
                    .collect::<Result<_, _>>()?,
            )),
            other => Err(TreeError(format!("unknown term kind `{other}`"))),
        }
    }
}

impl TryFrom<FormulaTree> for Formula {
    type Error = TreeError;

    fn try_from(t: FormulaTree) -> Result<Self, TreeError> {
        let child = |c: Option<Box<FormulaTree>>, field: &str| -> Result<Formula, TreeError> {
            let c = c.ok_or_else(|| TreeError(format!("`{}` node lacks `{field}`", t.kind)))?;
            Formula::try_from(*c)
        };
        let kind = t.kind.clone();
        let f = match kind.as_str() {
            "atom" => {
                let symbol = t
                    .symbol
                    .clone()
                    .ok_or_else(|| TreeError("atom lacks `symbol`".into()))?;
                let args = t
                    .args
                    .iter()
                    .flatten()
                    .map(Term::try_from)
                    .collect::<Result<_, _>>()?;
                Formula::Atom(Atom::new(symbol, args))
            }
            "not" => Formula::not(child(t.body, "body")?),
            "id" => Formula::id(child(t.body, "body")?),
            "ob" => Formula::ob(child(t.body, "body")?),
            "pm" => Formula::pm(child(t.body, "body")?),
            "fb" => Formula::fb(child(t.body, "body")?),
            "and" | "or" | "implies" | "cond_ob" | "cond_pm" | "cond_fb" => {
                let l = child(t.left.clone(), "left")?;
                let r = child(t.right, "right")?;
                match kind.as_str() {
                    "and" => Formula::and(l, r),
                    "or" => Formula::or(l, r),
                    "implies" => Formula::implies(l, r),
                    "cond_ob" => Formula::CondOb(Box::new(l), Box::new(r)),
                    "cond_pm" => Formula::CondPm(Box::new(l), Box::new(r)),
                    _ => Formula::CondFb(Box::new(l), Box::new(r)),
                }
            }
            other => return Err(TreeError(format!("unknown formula kind `{other}`"))),
        };
        Ok(f)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormulaTree::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let tree = FormulaTree::deserialize(d)?;
        Formula::try_from(tree).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TermTree::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let tree = TermTree::deserialize(d)?;
        Term::try_from(&tree).map_err(serde::de::Error::custom)
    }
}
