//! Translation of deontic formulas into two-sorted first-order clauses.

mod clausify;
mod fol;
mod ground;
mod modal;
mod tptp;
mod translate;

pub use clausify::*;
pub use fol::{FoAtom, FoFormula, FoLiteral, FoTerm, Sort, Substitution, Var};
pub use ground::{ground_if_finite, Grounding, NotFinite};
pub use modal::{expand_deontic, ModalFormula, Modality};
pub use tptp::{export_cnf, import_cnf, CnfParseError};
pub use translate::{individual_term, standard_translate, translate_sentence};
