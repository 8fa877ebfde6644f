use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{parse_term, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Legislation,
    Query,
}

/// Half-open range of Unicode scalar values in the document body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn intersects(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
    Id,
    Ob,
    Pm,
    Fb,
    CondOb,
    CondPm,
    CondFb,
}

impl Connective {
    pub fn child_count(self) -> usize {
        match self {
            Connective::Not | Connective::Id | Connective::Ob | Connective::Pm | Connective::Fb => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AnnotationKind {
    /// An atom; `args` are term texts such as `X` or `c`.
    Term {
        name: String,
        #[serde(default)]
        args: Vec<String>,
    },
    Composite { connective: Connective },
    Goal,
}

impl AnnotationKind {
    pub fn term(name: impl Into<String>, args: &[&str]) -> Self {
        AnnotationKind::Term {
            name: name.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    /// Outer-to-inner order used to nest annotations with identical spans.
    fn rank(&self) -> u8 {
        match self {
            AnnotationKind::Goal => 0,
            AnnotationKind::Composite { .. } => 1,
            AnnotationKind::Term { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Annotation {
    pub id: String,
    pub span: Span,
    #[serde(flatten)]
    pub kind: AnnotationKind,
    /// Derived from the spans; ignored on input and recomputed.
    #[serde(default)]
    pub children: Vec<String>,
}

impl Annotation {
    pub fn new(id: impl Into<String>, span: Span, kind: AnnotationKind) -> Self {
        Annotation {
            id: id.into(),
            span,
            kind,
            children: Vec::new(),
        }
    }

    /// Whether `self` sits above `other` in the forest.
    fn encloses(&self, other: &Annotation) -> bool {
        self.span.contains(&other.span)
            && (self.span != other.span || self.kind.rank() < other.kind.rank())
    }

    /// Parsed term arguments.
    pub fn term_args(&self) -> Result<Vec<Term>, AnnotationError> {
        match &self.kind {
            AnnotationKind::Term { args, .. } => args
                .iter()
                .map(|a| {
                    parse_term(a).map_err(|e| AnnotationError::InvalidArgument {
                        id: self.id.clone(),
                        arg: a.clone(),
                        message: e.to_string(),
                    })
                })
                .collect(),
            _ => Ok(Vec::new()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotationError {
    #[error("annotation id must not be empty")]
    EmptyId,
    #[error("duplicate annotation id `{0}`")]
    DuplicateId(String),
    #[error("annotation `{id}` spans {start}..{end}, outside a body of length {len}")]
    OutOfBounds {
        id: String,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("annotation `{id}` has an empty span")]
    EmptySpan { id: String },
    #[error("annotation `{id}` partially overlaps `{other}`")]
    Overlap { id: String, other: String },
    #[error("annotations `{id}` and `{other}` cover the same text and cannot be ordered")]
    AmbiguousNesting { id: String, other: String },
    #[error("term annotation `{term}` cannot contain `{child}`")]
    TermNotLeaf { term: String, child: String },
    #[error("goal annotation `{id}` must not be nested inside another annotation")]
    GoalNotRoot { id: String },
    #[error("goal annotation `{id}` is only allowed on query documents")]
    GoalOutsideQuery { id: String },
    #[error("query already has goal `{existing}`; cannot add `{id}`")]
    SecondGoal { id: String, existing: String },
    #[error("annotation `{id}`: `{name}` is not a valid term name")]
    InvalidTermName { id: String, name: String },
    #[error("annotation `{id}`: bad argument `{arg}`: {message}")]
    InvalidArgument {
        id: String,
        arg: String,
        message: String,
    },
}

impl AnnotationError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            AnnotationError::Overlap { .. } => "overlap_error",
            AnnotationError::AmbiguousNesting { .. } => "ambiguous_nesting",
            AnnotationError::SecondGoal { .. } => "second_goal",
            AnnotationError::GoalOutsideQuery { .. } => "goal_not_allowed",
            AnnotationError::TermNotLeaf { .. } | AnnotationError::GoalNotRoot { .. } => {
                "structure_error"
            }
            AnnotationError::OutOfBounds { .. } | AnnotationError::EmptySpan { .. } => "span_error",
            AnnotationError::EmptyId | AnnotationError::DuplicateId(_) => "id_error",
            AnnotationError::InvalidTermName { .. } | AnnotationError::InvalidArgument { .. } => {
                "invalid_term"
            }
        }
    }

    /// The annotation the error is about, when there is one.
    pub fn annotation(&self) -> Option<&str> {
        match self {
            AnnotationError::EmptyId => None,
            AnnotationError::DuplicateId(id) => Some(id),
            AnnotationError::TermNotLeaf { term, .. } => Some(term),
            AnnotationError::OutOfBounds { id, .. }
            | AnnotationError::EmptySpan { id }
            | AnnotationError::Overlap { id, .. }
            | AnnotationError::AmbiguousNesting { id, .. }
            | AnnotationError::GoalNotRoot { id }
            | AnnotationError::GoalOutsideQuery { id }
            | AnnotationError::SecondGoal { id, .. }
            | AnnotationError::InvalidTermName { id, .. }
            | AnnotationError::InvalidArgument { id, .. } => Some(id),
        }
    }
}

/// An annotated text. Annotations form a forest derived from their spans.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    pub body: String,
    pub kind: DocumentKind,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
}

pub(crate) fn is_term_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        title: impl Into<String>,
        body: impl Into<String>,
        kind: DocumentKind,
    ) -> Self {
        Document {
            id: id.into(),
            title: title.into(),
            body: body.into(),
            kind,
            annotations: Vec::new(),
        }
    }

    pub fn body_len(&self) -> usize {
        self.body.chars().count()
    }

    /// Text under `span`.
    pub fn text(&self, span: Span) -> String {
        self.body
            .chars()
            .skip(span.start)
            .take(span.len())
            .collect()
    }

    pub fn get(&self, id: &str) -> Option<&Annotation> {
        self.annotations.iter().find(|a| a.id == id)
    }

    pub fn goal(&self) -> Option<&Annotation> {
        self.annotations
            .iter()
            .find(|a| a.kind == AnnotationKind::Goal)
    }

    /// Annotations without a parent, in reading order.
    pub fn roots(&self) -> Vec<&Annotation> {
        let nested: BTreeSet<&str> = self
            .annotations
            .iter()
            .flat_map(|a| a.children.iter().map(String::as_str))
            .collect();
        self.annotations
            .iter()
            .filter(|a| !nested.contains(a.id.as_str()))
            .collect()
    }

    /// First id of the form `a<n>` not in use.
    pub fn fresh_id(&self) -> String {
        let used: BTreeSet<&str> = self.annotations.iter().map(|a| a.id.as_str()).collect();
        (1..)
            .map(|n| format!("a{n}"))
            .find(|id| !used.contains(id.as_str()))
            .expect("unbounded")
    }

    /// A copy of `self` with `a` inserted at the nesting position its span
    /// implies. Any `children` given on `a` are ignored.
    pub fn add_annotation(&self, a: Annotation) -> Result<Document, AnnotationError> {
        if a.kind == AnnotationKind::Goal {
            if self.kind != DocumentKind::Query {
                return Err(AnnotationError::GoalOutsideQuery { id: a.id });
            }
            if let Some(existing) = self.goal() {
                return Err(AnnotationError::SecondGoal {
                    id: a.id,
                    existing: existing.id.clone(),
                });
            }
        }
        let mut d = self.clone();
        d.annotations.push(a);
        d.normalize()?;
        Ok(d)
    }

    /// Recomputes the forest from the spans and puts annotations in
    /// canonical order (start ascending, wider first, outer kinds first).
    ///
    /// Idempotent; the result does not depend on the input order.
    pub fn normalize(&mut self) -> Result<(), AnnotationError> {
        let len = self.body_len();
        let mut ids = BTreeSet::new();
        let mut goals = Vec::new();
        for a in &self.annotations {
            if a.id.is_empty() {
                return Err(AnnotationError::EmptyId);
            }
            if !ids.insert(a.id.as_str()) {
                return Err(AnnotationError::DuplicateId(a.id.clone()));
            }
            if a.span.end > len || a.span.start > a.span.end {
                return Err(AnnotationError::OutOfBounds {
                    id: a.id.clone(),
                    start: a.span.start,
                    end: a.span.end,
                    len,
                });
            }
            if a.span.is_empty() {
                return Err(AnnotationError::EmptySpan { id: a.id.clone() });
            }
            match &a.kind {
                AnnotationKind::Term { name, .. } => {
                    if !is_term_name(name) {
                        return Err(AnnotationError::InvalidTermName {
                            id: a.id.clone(),
                            name: name.clone(),
                        });
                    }
                    a.term_args()?;
                }
                AnnotationKind::Goal => goals.push(a.id.clone()),
                AnnotationKind::Composite { .. } => {}
            }
        }
        if let Some(first) = goals.first() {
            if self.kind != DocumentKind::Query {
                return Err(AnnotationError::GoalOutsideQuery { id: first.clone() });
            }
            if let Some(second) = goals.get(1) {
                return Err(AnnotationError::SecondGoal {
                    id: second.clone(),
                    existing: first.clone(),
                });
            }
        }

        self.annotations
            .sort_by_key(|a| (a.span.start, Reverse(a.span.end), a.kind.rank(), a.id.clone()));
        let anns = &self.annotations;
        for (i, a) in anns.iter().enumerate() {
            for b in &anns[i + 1..] {
                if !a.span.intersects(&b.span) {
                    continue;
                }
                if a.span == b.span && a.kind.rank() == b.kind.rank() {
                    return Err(AnnotationError::AmbiguousNesting {
                        id: b.id.clone(),
                        other: a.id.clone(),
                    });
                }
                if !a.span.contains(&b.span) && !b.span.contains(&a.span) {
                    return Err(AnnotationError::Overlap {
                        id: b.id.clone(),
                        other: a.id.clone(),
                    });
                }
            }
        }

        // In canonical order every encloser precedes what it encloses, so
        // the parent is the last encloser seen.
        let mut parent: Vec<Option<usize>> = vec![None; anns.len()];
        for (j, b) in anns.iter().enumerate() {
            parent[j] = (0..j).rev().find(|&i| anns[i].encloses(b));
        }
        let mut children: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (j, p) in parent.iter().enumerate() {
            let Some(p) = *p else { continue };
            let (outer, inner) = (&anns[p], &anns[j]);
            if matches!(outer.kind, AnnotationKind::Term { .. }) {
                return Err(AnnotationError::TermNotLeaf {
                    term: outer.id.clone(),
                    child: inner.id.clone(),
                });
            }
            if inner.kind == AnnotationKind::Goal {
                return Err(AnnotationError::GoalNotRoot {
                    id: inner.id.clone(),
                });
            }
            children.entry(p).or_default().push(inner.id.clone());
        }
        for (i, a) in self.annotations.iter_mut().enumerate() {
            a.children = children.remove(&i).unwrap_or_default();
        }
        Ok(())
    }

    /// Checks the structure without modifying the document.
    pub fn validate(&self) -> Result<(), AnnotationError> {
        let mut d = self.clone();
        d.normalize()?;
        Ok(())
    }
}
