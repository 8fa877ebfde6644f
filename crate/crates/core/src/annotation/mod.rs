//! Annotated documents, their compilation to formulas, and the vocabulary
//! of annotated terms.

mod compile;
mod document;
mod vocabulary;

pub use compile::{compile_document, query_spec, CompileError, Compiled};
pub use document::{
    Annotation, AnnotationError, AnnotationKind, Connective, Document, DocumentKind, Span,
};
pub use vocabulary::{
    auto_name, extract_vocabulary, NoAutoName, Occurrence, Vocabulary, VocabularyConflict,
    VocabularyEntry,
};
