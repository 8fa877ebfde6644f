use crate::logic::{Atom, ClosedFormula, Term};

use super::fol::{FoAtom, FoFormula, FoTerm, Var};
use super::modal::{expand_deontic, ModalFormula};

pub fn individual_term(t: &Term) -> FoTerm {
    match t {
        Term::Var(v) => FoTerm::var(Var::individual(v.clone())),
        Term::App(f, args) => FoTerm::Fn {
            symbol: f.clone(),
            args: args.iter().map(individual_term).collect(),
        },
    }
}

fn domain_atom(a: &Atom, world: &FoTerm) -> FoAtom {
    FoAtom::Pred {
        predicate: a.predicate.clone(),
        args: a.args.iter().map(individual_term).collect(),
        world: world.clone(),
    }
}

struct Translator {
    next: usize,
    avoid: Option<String>,
}

impl Translator {
    fn fresh_world(&mut self) -> Var {
        loop {
            self.next += 1;
            let name = format!("V{}", self.next);
            if self.avoid.as_deref() != Some(name.as_str()) {
                return Var::world(name);
            }
        }
    }

    fn translate(&mut self, f: &ModalFormula, w: &FoTerm) -> FoFormula {
        match f {
            ModalFormula::Atom(a) => FoFormula::Atom(domain_atom(a, w)),
            ModalFormula::Not(g) => FoFormula::not(self.translate(g, w)),
            ModalFormula::And(l, r) => FoFormula::and(self.translate(l, w), self.translate(r, w)),
            ModalFormula::Or(l, r) => FoFormula::or(self.translate(l, w), self.translate(r, w)),
            ModalFormula::Implies(l, r) => {
                FoFormula::implies(self.translate(l, w), self.translate(r, w))
            }
            ModalFormula::Box(m, g) => {
                let v = self.fresh_world();
                let vt = FoTerm::var(v.clone());
                let guard = FoFormula::Atom(FoAtom::Access {
                    modality: *m,
                    from: w.clone(),
                    to: vt.clone(),
                });
                let body = self.translate(g, &vt);
                FoFormula::forall(v, FoFormula::implies(guard, body))
            }
        }
    }
}

/// Relational standard translation of `f` evaluated at `world`.
///
/// Atoms get `world` as an extra last argument and each box becomes a
/// guarded universal over a fresh world variable.
pub fn standard_translate(f: &ModalFormula, world: &FoTerm) -> FoFormula {
    let avoid = match world {
        FoTerm::Var { var } => Some(var.name.clone()),
        _ => None,
    };
    Translator { next: 0, avoid }.translate(f, world)
}

/// Full translation of a closed sentence: deontic expansion, standard
/// translation at the actual world, and individual quantifiers for the
/// closure variables (outermost, constant domain).
pub fn translate_sentence(cf: &ClosedFormula) -> FoFormula {
    let body = standard_translate(&expand_deontic(&cf.body), &FoTerm::actual_world());
    cf.variables
        .iter()
        .rev()
        .fold(body, |acc, v| FoFormula::forall(Var::individual(v.clone()), acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, UniversalClosure};

    fn st(s: &str) -> String {
        let m = expand_deontic(&parse_formula(s).unwrap());
        standard_translate(&m, &FoTerm::actual_world()).to_string()
    }

    #[test]
    fn atomic_case_appends_world() {
        assert_eq!(st("p"), "p(w0)");
        assert_eq!(st("adult(c)"), "adult(c, w0)");
    }

    #[test]
    fn box_becomes_guarded_universal() {
        assert_eq!(st("Ob p"), "![V1]: (r_d(w0, V1) => p(V1))");
        assert_eq!(st("Id Ob p"), "![V1]: (r_i(w0, V1) => ![V2]: (r_d(V1, V2) => p(V2)))");
    }

    #[test]
    fn permission_is_dual() {
        assert_eq!(st("Pm q"), "~![V1]: (r_d(w0, V1) => ~q(V1))");
    }

    #[test]
    fn closure_variables_become_outer_individual_quantifiers() {
        let cf = parse_formula("smoke(X) => Fb fine(X)").unwrap().universal_closure();
        assert_eq!(
            translate_sentence(&cf).to_string(),
            "![X]: (smoke(X, w0) => ![V1]: (r_d(w0, V1) => ~fine(X, V1)))"
        );
    }

    #[test]
    fn fresh_names_avoid_the_evaluation_world() {
        let m = expand_deontic(&parse_formula("Ob p").unwrap());
        let out = standard_translate(&m, &FoTerm::var(Var::world("V1"))).to_string();
        assert_eq!(out, "![V2]: (r_d(V1, V2) => p(V2))");
    }
}
