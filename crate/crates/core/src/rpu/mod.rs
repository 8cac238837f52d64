//! Request processing: normalize raw text, tokenize it against a closed
//! lexicon, parse it with a small deterministic grammar, and rebuild it as
//! a triple-based [`QueryModel`].

mod grammar;
mod lexicon;
mod reconstruct;
mod tokenize;

pub use grammar::{parse, Qualifier, RecognizedContent};
pub use lexicon::{Lexicon, LexiconEntry, LexiconError, PartOfSpeech};
pub use reconstruct::{
    constraints_of, fnv1a64, preposition_predicate, reconstruct, request_iri, Provenance,
    QueryModel,
};
pub use tokenize::{read_request, tokenize, Token, TokenKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RpuError {
    #[error("empty request")]
    EmptyRequest,
    #[error("unterminated quote starting at byte {offset}")]
    UnterminatedQuote { offset: usize },
    #[error("no object phrase: the request names nothing to search for")]
    NoObjectPhrase,
    #[error("preposition {lexeme:?} at byte {offset} has no value")]
    DanglingPreposition { lexeme: String, offset: usize },
    #[error("unexpected {kind} token {lexeme:?} at byte {offset}")]
    UnexpectedToken {
        lexeme: String,
        kind: TokenKind,
        offset: usize,
    },
    #[error("head noun {lexeme:?} has no domain")]
    NoDomain { lexeme: String },
    #[error("lexicon entry {lexeme:?} has no IRI")]
    MissingIri { lexeme: String },
    #[error("preposition {lexeme:?} has no predicate mapping")]
    UnmappedPreposition { lexeme: String },
}

/// Processing stage of a request, used to attribute failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpuStage {
    Read,
    Tokenize,
    Parse,
    Reconstruct,
}

impl RpuStage {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Read => "read",
            Self::Tokenize => "tokenize",
            Self::Parse => "parse",
            Self::Reconstruct => "reconstruct",
        }
    }
}

/// Run all four steps on one raw request.
pub fn process_request(raw: &str, lexicon: &Lexicon) -> Result<QueryModel, (RpuStage, RpuError)> {
    let normalized = read_request(raw).map_err(|e| (RpuStage::Read, e))?;
    let tokens = tokenize(&normalized, lexicon).map_err(|e| (RpuStage::Tokenize, e))?;
    let rc = parse(&tokens).map_err(|e| (RpuStage::Parse, e))?;
    reconstruct(&rc, lexicon, raw, &normalized).map_err(|e| (RpuStage::Reconstruct, e))
}
