use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("symbol `{symbol}` used with arity {found}, but it has arity {expected}")]
    ArityConflict {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("symbol `{symbol}` is used both as a predicate and as a function")]
    KindConflict { symbol: String },

    #[error("symbol `{symbol}` is not declared in the signature")]
    Undeclared { symbol: String },

    #[error("symbol `{symbol}` is reserved for the translation to first-order clauses")]
    Reserved { symbol: String },

    #[error("formula name must not be empty")]
    EmptyName,

    #[error("duplicate formula name `{0}`")]
    DuplicateName(String),
}

pub type Result<T, E = LogicError> = std::result::Result<T, E>;

impl LogicError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            LogicError::Syntax { .. } => "syntax_error",
            LogicError::ArityConflict { .. } | LogicError::KindConflict { .. } => "arity_conflict",
            LogicError::Undeclared { .. } => "undeclared_symbol",
            LogicError::Reserved { .. } => "reserved_symbol",
            LogicError::EmptyName | LogicError::DuplicateName(_) => "name_error",
        }
    }
}
