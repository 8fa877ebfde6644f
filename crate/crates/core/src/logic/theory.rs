use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::error::{LogicError, Result};
use super::signature::Signature;
use super::syntax::Formula;

/// A formula together with the variables it is universally closed over.
///
/// The closure is metadata: the body stays quantifier-free, and the bound
/// variables are listed in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosedFormula {
    pub variables: Vec<String>,
    pub body: Formula,
}

impl ClosedFormula {
    /// Variables left free once the closure is taken into account; always empty.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let bound: BTreeSet<&String> = self.variables.iter().collect();
        self.body
            .free_variables()
            .into_iter()
            .filter(|v| !bound.contains(v))
            .collect()
    }

    pub fn is_ground(&self) -> bool {
        self.variables.is_empty()
    }
}

/// Explicit universal quantification at top level.
pub trait UniversalClosure {
    fn universal_closure(&self) -> ClosedFormula;
}

impl UniversalClosure for Formula {
    fn universal_closure(&self) -> ClosedFormula {
        ClosedFormula {
            variables: self.variables_in_order(),
            body: self.clone(),
        }
    }
}

impl UniversalClosure for ClosedFormula {
    fn universal_closure(&self) -> ClosedFormula {
        self.body.universal_closure()
    }
}

/// The closure prints as its body; reading the text back and closing it
/// yields the same value.
impl fmt::Display for ClosedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedFormula {
    pub name: String,
    pub formula: ClosedFormula,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
}

impl NamedFormula {
    pub fn new(name: impl Into<String>, formula: &Formula) -> Self {
        NamedFormula {
            name: name.into(),
            formula: formula.universal_closure(),
            origin: None,
        }
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = Some(origin.into());
        self
    }
}

/// An ordered list of named sentences over a shared signature.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theory {
    pub signature: Signature,
    pub formulas: Vec<NamedFormula>,
}

impl Theory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a theory from named formulas, inferring the signature.
    pub fn from_formulas(formulas: Vec<NamedFormula>) -> Result<Self> {
        let mut t = Theory::new();
        for nf in formulas {
            t.push(nf)?;
        }
        Ok(t)
    }

    /// Parses `text` and appends it under `name`.
    pub fn add(&mut self, name: impl Into<String>, text: &str) -> Result<&NamedFormula> {
        let f = super::parser::parse_formula(text)?;
        self.push(NamedFormula::new(name, &f))?;
        Ok(self.formulas.last().expect("just pushed"))
    }

    pub fn push(&mut self, nf: NamedFormula) -> Result<()> {
        if nf.name.is_empty() {
            return Err(LogicError::EmptyName);
        }
        if self.formulas.iter().any(|g| g.name == nf.name) {
            return Err(LogicError::DuplicateName(nf.name));
        }
        self.signature.declare_formula(&nf.formula.body)?;
        self.formulas.push(nf);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&NamedFormula> {
        self.formulas.iter().find(|f| f.name == name)
    }

    /// Checks names and that every formula respects the signature.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for nf in &self.formulas {
            if nf.name.is_empty() {
                return Err(LogicError::EmptyName);
            }
            if !seen.insert(nf.name.as_str()) {
                return Err(LogicError::DuplicateName(nf.name.clone()));
            }
            self.signature.check_formula(&nf.formula.body)?;
        }
        Ok(())
    }

    /// The theory without its `index`-th formula. The signature is kept.
    pub fn without(&self, index: usize) -> Theory {
        let mut t = self.clone();
        t.formulas.remove(index);
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn closure_lists_variables_by_first_occurrence() {
        let f = parse_formula("p(X) & q(Y) & r(X, Z)").unwrap();
        let c = f.universal_closure();
        assert_eq!(c.variables, vec!["X", "Y", "Z"]);
        assert!(c.free_variables().is_empty());
    }

    #[test]
    fn closing_a_ground_formula_is_identity() {
        let f = parse_formula("Ob child_in_vehicle").unwrap();
        let c = f.universal_closure();
        assert!(c.variables.is_empty());
        assert_eq!(c.body, f);
    }

    #[test]
    fn closure_is_idempotent() {
        let f = parse_formula("smoke(X) => Fb fine(X)").unwrap();
        let once = f.universal_closure();
        assert_eq!(once.universal_closure(), once);
    }

    #[test]
    fn free_variables_examples() {
        let vars = |s: &str| parse_formula(s).unwrap().free_variables();
        assert_eq!(vars("smoke(X)"), BTreeSet::from(["X".to_string()]));
        assert!(vars("child_in_vehicle").is_empty());
        assert_eq!(
            vars("adult(X) & punishment_fine(Y)"),
            BTreeSet::from(["X".to_string(), "Y".to_string()])
        );
    }

    #[test]
    fn theory_rejects_duplicate_and_empty_names() {
        let mut t = Theory::new();
        t.add("R1", "p").unwrap();
        assert_eq!(t.add("R1", "q").unwrap_err(), LogicError::DuplicateName("R1".into()));
        assert_eq!(t.add("", "q").unwrap_err(), LogicError::EmptyName);
        assert!(matches!(t.add("R2", "p(X)"), Err(LogicError::ArityConflict { .. })));
        assert_eq!(t.len(), 1);
        t.validate().unwrap();
    }
}
