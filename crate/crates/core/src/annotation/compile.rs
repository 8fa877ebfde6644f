use std::collections::BTreeMap;

use thiserror::Error;

use crate::logic::{
    ClosedFormula, DeonticOp, Formula, LogicError, NamedFormula, Signature, Theory,
    UniversalClosure,
};
use crate::services::QuerySpec;

use super::document::{Annotation, AnnotationError, AnnotationKind, Connective, Document};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Structure(#[from] AnnotationError),
    #[error("annotation `{id}` needs {expected} child annotation(s), found {found}")]
    ChildCount {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("annotation `{id}`: {source}")]
    Signature {
        id: String,
        #[source]
        source: LogicError,
    },
    #[error("query document `{document}` has no goal annotation")]
    MissingGoal { document: String },
}

impl CompileError {
    pub fn code(&self) -> &'static str {
        match self {
            CompileError::Structure(e) => e.code(),
            CompileError::ChildCount { .. } => "arity_error",
            CompileError::Signature { source, .. } => source.code(),
            CompileError::MissingGoal { .. } => "missing_goal",
        }
    }

    pub fn annotation(&self) -> Option<&str> {
        match self {
            CompileError::Structure(e) => e.annotation(),
            CompileError::ChildCount { id, .. } | CompileError::Signature { id, .. } => Some(id),
            CompileError::MissingGoal { .. } => None,
        }
    }
}

/// Formulas of a document, in reading order, and the query goal if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    pub formulas: Vec<NamedFormula>,
    pub goal: Option<ClosedFormula>,
    pub signature: Signature,
}

impl Compiled {
    pub fn theory(&self) -> Theory {
        Theory {
            signature: self.signature.clone(),
            formulas: self.formulas.clone(),
        }
    }
}

struct Forest<'a> {
    by_id: BTreeMap<&'a str, &'a Annotation>,
}

impl<'a> Forest<'a> {
    fn children(&self, a: &'a Annotation, expected: usize) -> Result<Vec<&'a Annotation>, CompileError> {
        if a.children.len() != expected {
            return Err(CompileError::ChildCount {
                id: a.id.clone(),
                expected,
                found: a.children.len(),
            });
        }
        Ok(a.children.iter().map(|c| self.by_id[c.as_str()]).collect())
    }

    fn formula(&self, a: &'a Annotation) -> Result<Formula, CompileError> {
        match &a.kind {
            AnnotationKind::Term { name, .. } => Ok(Formula::atom(name.clone(), a.term_args()?)),
            AnnotationKind::Goal => self.formula(self.children(a, 1)?[0]),
            AnnotationKind::Composite { connective } => {
                let c = *connective;
                let kids = self.children(a, c.child_count())?;
                let mut fs = kids
                    .into_iter()
                    .map(|k| self.formula(k))
                    .collect::<Result<Vec<_>, _>>()?;
                let one = |fs: &mut Vec<Formula>| fs.remove(0);
                Ok(match c {
                    Connective::Not => Formula::not(one(&mut fs)),
                    Connective::Id => Formula::id(one(&mut fs)),
                    Connective::Ob => Formula::ob(one(&mut fs)),
                    Connective::Pm => Formula::pm(one(&mut fs)),
                    Connective::Fb => Formula::fb(one(&mut fs)),
                    _ => {
                        let l = one(&mut fs);
                        let r = one(&mut fs);
                        match c {
                            Connective::And => Formula::and(l, r),
                            Connective::Or => Formula::or(l, r),
                            Connective::Implies => Formula::implies(l, r),
                            Connective::CondOb => Formula::cond(DeonticOp::Ob, l, r),
                            Connective::CondPm => Formula::cond(DeonticOp::Pm, l, r),
                            Connective::CondFb => Formula::cond(DeonticOp::Fb, l, r),
                            _ => unreachable!("unary connectives handled above"),
                        }
                    }
                })
            }
        }
    }
}

/// Compiles each root annotation to one universally closed formula named
/// `<title> #k`; the goal subtree becomes the query goal instead.
pub fn compile_document(d: &Document) -> Result<Compiled, CompileError> {
    let mut d = d.clone();
    d.normalize()?;
    let forest = Forest {
        by_id: d.annotations.iter().map(|a| (a.id.as_str(), a)).collect(),
    };
    let mut signature = Signature::default();
    let mut formulas = Vec::new();
    let mut goal = None;
    for root in d.roots() {
        let f = forest.formula(root)?;
        signature
            .declare_formula(&f)
            .map_err(|source| CompileError::Signature {
                id: root.id.clone(),
                source,
            })?;
        if root.kind == AnnotationKind::Goal {
            goal = Some(f.universal_closure());
        } else {
            let name = format!("{} #{}", d.title, formulas.len() + 1);
            formulas.push(NamedFormula::new(name, &f).with_origin(root.id.clone()));
        }
    }
    Ok(Compiled {
        formulas,
        goal,
        signature,
    })
}

/// The query a query document poses; its title is the query name.
pub fn query_spec(d: &Document) -> Result<QuerySpec, CompileError> {
    let c = compile_document(d)?;
    let goal = c.goal.ok_or_else(|| CompileError::MissingGoal {
        document: d.id.clone(),
    })?;
    Ok(QuerySpec::new(d.title.clone(), c.formulas, goal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{DocumentKind, Span};
    use crate::logic::parse_formula;

    fn add(d: Document, id: &str, s: usize, e: usize, kind: AnnotationKind) -> Document {
        d.add_annotation(Annotation::new(id, Span::new(s, e), kind)).unwrap()
    }

    fn comp(c: Connective) -> AnnotationKind {
        AnnotationKind::Composite { connective: c }
    }

    #[test]
    fn conditional_prohibition_compiles_structurally() {
        //                   0         1         2         3
        //                   0123456789012345678901234567890123456
        let body = "an adult who smokes gets no fine";
        let mut d = Document::new("d", "Rule", body, DocumentKind::Legislation);
        d = add(d, "cond", 0, 32, comp(Connective::CondFb));
        d = add(d, "and", 3, 19, comp(Connective::And));
        d = add(d, "adult", 3, 8, AnnotationKind::term("adult", &["X"]));
        d = add(d, "smoke", 13, 19, AnnotationKind::term("smoke", &["X"]));
        d = add(d, "fine", 28, 32, AnnotationKind::term("punishment_fine", &["X"]));
        let c = compile_document(&d).unwrap();
        assert_eq!(c.formulas.len(), 1);
        let want = parse_formula("adult(X) & smoke(X) =Fb=> punishment_fine(X)").unwrap();
        assert_eq!(c.formulas[0].formula, want.universal_closure());
        assert_eq!(c.formulas[0].formula.variables, vec!["X"]);
        assert_eq!(c.formulas[0].name, "Rule #1");
        assert_eq!(c.formulas[0].origin.as_deref(), Some("cond"));
    }

    #[test]
    fn query_facts_and_goal() {
        //          0         1         2
        //          0123456789012345678901234567
        let body = "adult, smokes; may be fined";
        let mut q = Document::new("q", "Test case", body, DocumentKind::Query);
        q = add(q, "f1", 0, 5, AnnotationKind::term("adult", &["c"]));
        q = add(q, "f2", 7, 13, AnnotationKind::term("smoke", &["c"]));
        q = add(q, "g", 15, 27, AnnotationKind::Goal);
        q = add(q, "pm", 15, 27, comp(Connective::Pm));
        q = add(q, "t", 22, 27, AnnotationKind::term("punishment_fine", &["c"]));
        let spec = query_spec(&q).unwrap();
        assert!(spec.is_test);
        let texts: Vec<String> = spec.assumptions.iter().map(|a| a.formula.to_string()).collect();
        assert_eq!(texts, vec!["adult(c)", "smoke(c)"]);
        assert_eq!(
            spec.goal,
            parse_formula("Pm punishment_fine(c)").unwrap().universal_closure()
        );
    }

    #[test]
    fn empty_document_compiles_to_nothing() {
        let d = Document::new("d", "Empty", "text", DocumentKind::Legislation);
        let c = compile_document(&d).unwrap();
        assert!(c.formulas.is_empty());
        assert!(c.goal.is_none());
    }

    #[test]
    fn wrong_child_count_is_a_compile_error() {
        let mut d = Document::new("d", "D", "p and", DocumentKind::Legislation);
        d = add(d, "and", 0, 5, comp(Connective::And));
        d = add(d, "p", 0, 1, AnnotationKind::term("p", &[]));
        let err = compile_document(&d).unwrap_err();
        assert_eq!(err.code(), "arity_error");
        assert_eq!(err.annotation(), Some("and"));
    }

    #[test]
    fn conflicting_arity_is_a_compile_error() {
        let mut d = Document::new("d", "D", "adult adult", DocumentKind::Legislation);
        d = add(d, "a", 0, 5, AnnotationKind::term("adult", &["X"]));
        d = add(d, "b", 6, 11, AnnotationKind::term("adult", &[]));
        let err = compile_document(&d).unwrap_err();
        assert_eq!(err.code(), "arity_conflict");
        assert_eq!(err.annotation(), Some("b"));
    }

    #[test]
    fn query_without_goal() {
        let q = Document::new("q", "Q", "text", DocumentKind::Query);
        assert_eq!(query_spec(&q).unwrap_err().code(), "missing_goal");
    }
}
