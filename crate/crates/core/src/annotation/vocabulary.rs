use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::document::{AnnotationKind, Document, Span};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub document: String,
    pub annotation: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabularyEntry {
    pub name: String,
    pub arity: usize,
    pub occurrences: Vec<Occurrence>,
}

/// A term used with more than one arity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabularyConflict {
    pub name: String,
    pub arities: Vec<usize>,
    pub occurrences: Vec<Occurrence>,
}

/// Term names sorted alphabetically. A name appears either as an entry or,
/// when its arity is inconsistent, as a conflict.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub entries: Vec<VocabularyEntry>,
    #[serde(default)]
    pub conflicts: Vec<VocabularyConflict>,
}

impl Vocabulary {
    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.name == name) || self.conflicts.iter().any(|c| c.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&VocabularyEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

pub fn extract_vocabulary(docs: &[Document]) -> Vocabulary {
    let mut seen: BTreeMap<&str, (BTreeSet<usize>, Vec<Occurrence>)> = BTreeMap::new();
    for d in docs {
        for a in &d.annotations {
            if let AnnotationKind::Term { name, args } = &a.kind {
                let slot = seen.entry(name).or_default();
                slot.0.insert(args.len());
                slot.1.push(Occurrence {
                    document: d.id.clone(),
                    annotation: a.id.clone(),
                    span: a.span,
                });
            }
        }
    }
    let mut v = Vocabulary::default();
    for (name, (arities, occurrences)) in seen {
        if arities.len() == 1 {
            v.entries.push(VocabularyEntry {
                name: name.to_owned(),
                arity: *arities.first().expect("one arity"),
                occurrences,
            });
        } else {
            v.conflicts.push(VocabularyConflict {
                name: name.to_owned(),
                arities: arities.into_iter().collect(),
                occurrences,
            });
        }
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` yields no usable term name; choose one manually")]
pub struct NoAutoName(pub String);

/// Derives a term name from selected text: lowercase, runs of anything but
/// ASCII letters and digits collapse to one underscore, outer underscores
/// are trimmed, and `_2`, `_3`, ... is appended while the name is taken.
/// A leading digit gets a `t_` prefix so the result is a valid identifier.
pub fn auto_name(selected: &str, existing: &Vocabulary) -> Result<String, NoAutoName> {
    let mut base = String::new();
    let mut gap = false;
    for c in selected.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_alphanumeric() {
            if gap && !base.is_empty() {
                base.push('_');
            }
            gap = false;
            base.push(c);
        } else {
            gap = true;
        }
    }
    if base.is_empty() {
        return Err(NoAutoName(selected.to_owned()));
    }
    if base.starts_with(|c: char| c.is_ascii_digit()) {
        base.insert_str(0, "t_");
    }
    if !existing.contains(&base) {
        return Ok(base);
    }
    Ok((2..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !existing.contains(n))
        .expect("unbounded"))
}
