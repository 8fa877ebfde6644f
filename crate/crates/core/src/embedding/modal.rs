use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::{Atom, Formula};

/// The two boxes of the target bi-modal language: the deontic box behind
/// Ob/Pm/Fb and the ideality box behind Id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modality {
    Deontic,
    Ideal,
}

impl Modality {
    pub const ALL: [Modality; 2] = [Modality::Deontic, Modality::Ideal];

    pub fn access_predicate(self) -> &'static str {
        match self {
            Modality::Deontic => "r_d",
            Modality::Ideal => "r_i",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Modality::Deontic => "d",
            Modality::Ideal => "i",
        }
    }
}

/// Normal bi-modal formula: atoms, Boolean connectives and two boxes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ModalFormula {
    Atom(Atom),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    Box(Modality, Box<ModalFormula>),
}

impl ModalFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: ModalFormula) -> Self {
        ModalFormula::Not(Box::new(f))
    }

    pub fn boxed(m: Modality, f: ModalFormula) -> Self {
        ModalFormula::Box(m, Box::new(f))
    }

    pub fn implies(l: ModalFormula, r: ModalFormula) -> Self {
        ModalFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            ModalFormula::Atom(_) => 0,
            ModalFormula::Not(g) => g.modal_depth(),
            ModalFormula::And(l, r) | ModalFormula::Or(l, r) | ModalFormula::Implies(l, r) => {
                l.modal_depth().max(r.modal_depth())
            }
            ModalFormula::Box(_, g) => 1 + g.modal_depth(),
        }
    }
}

/// Replaces the deontic operators by their definitions over the two boxes.
///
/// `Ob φ ↦ □d φ`, `Pm φ ↦ ¬□d ¬φ`, `Fb φ ↦ □d ¬φ`, `Id φ ↦ □i φ`, and each
/// conditional `φ =X=> ψ` becomes `φ ⇒ X ψ`.
pub fn expand_deontic(f: &Formula) -> ModalFormula {
    use ModalFormula as M;
    let deontic = |g: ModalFormula| M::boxed(Modality::Deontic, g);
    let ob = |g: &Formula| deontic(expand_deontic(g));
    let pm = |g: &Formula| M::not(deontic(M::not(expand_deontic(g))));
    let fb = |g: &Formula| deontic(M::not(expand_deontic(g)));
    match f {
        Formula::Atom(a) => M::Atom(a.clone()),
        Formula::Not(g) => M::not(expand_deontic(g)),
        Formula::And(l, r) => M::And(Box::new(expand_deontic(l)), Box::new(expand_deontic(r))),
        Formula::Or(l, r) => M::Or(Box::new(expand_deontic(l)), Box::new(expand_deontic(r))),
        Formula::Implies(l, r) => M::implies(expand_deontic(l), expand_deontic(r)),
        Formula::Id(g) => M::boxed(Modality::Ideal, expand_deontic(g)),
        Formula::Ob(g) => ob(g),
        Formula::Pm(g) => pm(g),
        Formula::Fb(g) => fb(g),
        Formula::CondOb(l, r) => M::implies(expand_deontic(l), ob(r)),
        Formula::CondPm(l, r) => M::implies(expand_deontic(l), pm(r)),
        Formula::CondFb(l, r) => M::implies(expand_deontic(l), fb(r)),
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModalFormula::Atom(a) => write!(f, "{a}"),
            ModalFormula::Not(g) => write!(f, "~{g}"),
            ModalFormula::And(l, r) => write!(f, "({l} & {r})"),
            ModalFormula::Or(l, r) => write!(f, "({l} | {r})"),
            ModalFormula::Implies(l, r) => write!(f, "({l} => {r})"),
            ModalFormula::Box(m, g) => write!(f, "[{}]{g}", m.tag()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn expand(s: &str) -> String {
        expand_deontic(&parse_formula(s).unwrap()).to_string()
    }

    #[test]
    fn definitional_examples() {
        assert_eq!(expand("Fb p"), "[d]~p");
        assert_eq!(expand("p =Pm=> q"), "(p => ~[d]~q)");
        assert_eq!(expand("Id Ob p"), "[i][d]p");
        assert_eq!(expand("p =Ob=> q"), "(p => [d]q)");
        assert_eq!(expand("p =Fb=> q"), "(p => [d]~q)");
    }

    #[test]
    fn prohibition_is_obligation_of_negation() {
        for s in ["p", "p & q(X)", "Ob p | !q", "Id (p => q)"] {
            let phi = parse_formula(s).unwrap();
            assert_eq!(
                expand_deontic(&Formula::fb(phi.clone())),
                expand_deontic(&Formula::ob(Formula::not(phi)))
            );
        }
    }
}
