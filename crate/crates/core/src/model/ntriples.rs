//! Line-oriented triple file format, a strict subset of N-Triples:
//!
//! ```text
//! <IRI> <IRI> (<IRI> | "literal") .
//! ```
//!
//! Literals know only the `\"` and `\\` escapes. A line starting with `#`
//! is a comment and blank lines are ignored.

use std::fmt;
use std::iter::Peekable;
use std::str::CharIndices;

use thiserror::Error;

use super::term::is_valid_iri;
use super::{Term, Triple, TripleStore};

/// Malformed input, located by 1-based line and character column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

struct Cursor<'a> {
    chars: Peekable<CharIndices<'a>>,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a str) -> Self {
        Self {
            chars: line.char_indices().peekable(),
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next().map(|(_, c)| c);
        if c.is_some() {
            self.column += 1;
        }
        c
    }

    fn skip_ws(&mut self) -> bool {
        let mut skipped = false;
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.bump();
            skipped = true;
        }
        skipped
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: 1,
            column: self.column,
            message: message.into(),
        }
    }

    fn iri(&mut self, position: &str) -> Result<Term, SyntaxError> {
        let start = self.column;
        if self.peek() != Some('<') {
            return Err(self.error(format!("expected IRI in {position} position")));
        }
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() || c == '<' => {
                    return Err(SyntaxError {
                        line: 1,
                        column: self.column - 1,
                        message: format!("illegal character {c:?} in IRI"),
                    })
                }
                Some(c) => value.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
        if !is_valid_iri(&value) {
            return Err(SyntaxError {
                line: 1,
                column: start,
                message: format!("IRI {value:?} is not absolute"),
            });
        }
        Term::iri(value).map_err(|e| SyntaxError {
            line: 1,
            column: start,
            message: e.to_string(),
        })
    }

    fn literal(&mut self) -> Result<Term, SyntaxError> {
        self.bump(); // opening quote
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(Term::literal(value)),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => value.push(c),
                    Some(c) => {
                        return Err(SyntaxError {
                            line: 1,
                            column: self.column - 2,
                            message: format!("unsupported escape \\{c}"),
                        })
                    }
                    None => return Err(self.error("unterminated literal")),
                },
                Some(c) => value.push(c),
                None => return Err(self.error("unterminated literal")),
            }
        }
    }
}

/// Parse one non-comment, non-blank record.
pub fn parse_triple_line(line: &str) -> Result<Triple, SyntaxError> {
    let mut cur = Cursor::new(line);
    cur.skip_ws();
    let subject = cur.iri("subject")?;
    if !cur.skip_ws() {
        return Err(cur.error("expected whitespace after subject"));
    }
    let predicate = cur.iri("predicate")?;
    if !cur.skip_ws() {
        return Err(cur.error("expected whitespace after predicate"));
    }
    let object = match cur.peek() {
        Some('<') => cur.iri("object")?,
        Some('"') => cur.literal()?,
        _ => return Err(cur.error("expected IRI or literal in object position")),
    };
    cur.skip_ws();
    if cur.bump() != Some('.') {
        return Err(SyntaxError {
            line: 1,
            column: cur.column.saturating_sub(1).max(1),
            message: "expected '.' terminating the triple".into(),
        });
    }
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.error("unexpected content after '.'"));
    }
    // subject and predicate are IRIs by construction
    Ok(Triple::new(subject, predicate, object).expect("IRI subject and predicate"))
}

/// Parse a whole document, skipping comments and blank lines.
pub fn parse_triples(text: &str) -> Result<TripleStore, SyntaxError> {
    let mut store = TripleStore::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim_start_matches([' ', '\t']);
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let triple = parse_triple_line(line).map_err(|e| SyntaxError {
            line: idx + 1,
            ..e
        })?;
        store.insert(triple);
    }
    Ok(store)
}

/// Canonical serialization: one triple per line in store order.
pub fn serialize_triples<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> String {
    let mut out = String::new();
    for t in triples {
        out.push_str(&t.to_line());
        out.push('\n');
    }
    out
}
