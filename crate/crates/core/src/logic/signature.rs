use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::error::{LogicError, Result};
use super::syntax::{Formula, Term};

/// Predicate symbols used for the accessibility relations after translation.
pub const RESERVED_PREDICATES: [&str; 2] = ["r_d", "r_i"];

/// Name of the actual world in translated clauses.
pub const ACTUAL_WORLD: &str = "w0";

/// Symbol names the translation claims for itself: `w0` and Skolem names of
/// the shape `skw_<n>` / `skc_<n>`.
pub fn is_reserved_function(name: &str) -> bool {
    if name == ACTUAL_WORLD {
        return true;
    }
    ["skw_", "skc_"].iter().any(|prefix| {
        name.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
    })
}

/// Predicate and function symbols with their arities. Variables are implicit:
/// any identifier starting with an uppercase letter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub predicates: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, usize>,
}

impl Signature {
    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<()> {
        if RESERVED_PREDICATES.contains(&name) {
            return Err(LogicError::Reserved {
                symbol: name.to_owned(),
            });
        }
        if self.functions.contains_key(name) {
            return Err(LogicError::KindConflict {
                symbol: name.to_owned(),
            });
        }
        declare(&mut self.predicates, name, arity)
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<()> {
        if is_reserved_function(name) {
            return Err(LogicError::Reserved {
                symbol: name.to_owned(),
            });
        }
        if self.predicates.contains_key(name) {
            return Err(LogicError::KindConflict {
                symbol: name.to_owned(),
            });
        }
        declare(&mut self.functions, name, arity)
    }

    /// Declares every symbol of `f`, failing on the first conflict.
    pub fn declare_formula(&mut self, f: &Formula) -> Result<()> {
        let mut result = Ok(());
        f.walk_atoms(&mut |atom| {
            if result.is_err() {
                return;
            }
            result = self
                .declare_predicate(&atom.predicate, atom.args.len())
                .and_then(|_| atom.args.iter().try_for_each(|t| self.declare_term(t)));
        });
        result
    }

    fn declare_term(&mut self, t: &Term) -> Result<()> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(name, args) => {
                self.declare_function(name, args.len())?;
                args.iter().try_for_each(|a| self.declare_term(a))
            }
        }
    }

    /// Checks that every symbol of `f` is declared with the arity it is used at.
    pub fn check_formula(&self, f: &Formula) -> Result<()> {
        let mut result = Ok(());
        f.walk_atoms(&mut |atom| {
            if result.is_err() {
                return;
            }
            result = check(&self.predicates, &atom.predicate, atom.args.len())
                .and_then(|_| atom.args.iter().try_for_each(|t| self.check_term(t)));
        });
        result
    }

    fn check_term(&self, t: &Term) -> Result<()> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(name, args) => {
                check(&self.functions, name, args.len())?;
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    /// Union of two signatures; fails if a symbol is used inconsistently.
    pub fn merge(&self, other: &Signature) -> Result<Signature> {
        let mut out = self.clone();
        for (name, &arity) in &other.predicates {
            out.declare_predicate(name, arity)?;
        }
        for (name, &arity) in &other.functions {
            out.declare_function(name, arity)?;
        }
        Ok(out)
    }
}

fn declare(table: &mut BTreeMap<String, usize>, name: &str, arity: usize) -> Result<()> {
    match table.get(name) {
        Some(&expected) if expected != arity => Err(LogicError::ArityConflict {
            symbol: name.to_owned(),
            expected,
            found: arity,
        }),
        Some(_) => Ok(()),
        None => {
            table.insert(name.to_owned(), arity);
            Ok(())
        }
    }
}

fn check(table: &BTreeMap<String, usize>, name: &str, arity: usize) -> Result<()> {
    match table.get(name) {
        None => Err(LogicError::Undeclared {
            symbol: name.to_owned(),
        }),
        Some(&expected) if expected != arity => Err(LogicError::ArityConflict {
            symbol: name.to_owned(),
            expected,
            found: arity,
        }),
        Some(_) => Ok(()),
    }
}
