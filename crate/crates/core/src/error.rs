use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid degree literal {literal:?}: {reason}")]
    InvalidDegree { literal: String, reason: String },

    #[error("{field}: {message}")]
    InvalidField { field: String, message: String },

    #[error("malformed JSON in {context}: {message}")]
    Json { context: String, message: String },

    #[error("{context}: unknown state {state:?}")]
    UnknownState { context: String, state: String },

    #[error("{context}: unknown symbol {symbol:?}")]
    UnknownSymbol { context: String, symbol: String },

    #[error("{context}: duplicate entry {entry}")]
    Duplicate { context: String, entry: String },

    #[error("automaton {name:?} has no states")]
    EmptyStates { name: String },

    #[error("approximate relations need a Heyting algebra (the Gödel t-norm)")]
    NotHeyting,

    #[error("fixpoint iteration did not stabilize within {iterations} sweeps")]
    NotConverged { iterations: usize },

    #[error("formula syntax error at byte {position}: {message}")]
    FormulaSyntax { position: usize, message: String },
}

impl Error {
    pub(crate) fn json(context: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Error::Json {
            context: context.into(),
            message: err.to_string(),
        }
    }
}
