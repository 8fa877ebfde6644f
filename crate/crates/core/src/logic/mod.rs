//! The deontic first-order language: terms, formulas, signatures, the text
//! grammar, and top-level universal closure.

mod error;
mod parser;
mod printer;
mod signature;
mod syntax;
mod theory;
mod tree;

pub use error::LogicError;
pub use parser::{parse_formula, parse_term, parse_with_signature};
pub use signature::{is_reserved_function, Signature, ACTUAL_WORLD, RESERVED_PREDICATES};
pub use syntax::{Atom, DeonticOp, Formula, Term};
pub use theory::{ClosedFormula, NamedFormula, Theory, UniversalClosure};
pub use tree::{FormulaTree, TermTree, TreeError};
