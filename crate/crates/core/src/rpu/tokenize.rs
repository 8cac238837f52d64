use std::fmt;

use super::lexicon::{Lexicon, PartOfSpeech};
use super::RpuError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Verb,
    Noun,
    Adj,
    Prep,
    Det,
    Quoted,
    Unknown,
}

impl From<PartOfSpeech> for TokenKind {
    fn from(pos: PartOfSpeech) -> Self {
        match pos {
            PartOfSpeech::Verb => Self::Verb,
            PartOfSpeech::Noun => Self::Noun,
            PartOfSpeech::Adj => Self::Adj,
            PartOfSpeech::Prep => Self::Prep,
            PartOfSpeech::Det => Self::Det,
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Verb => "VERB",
            Self::Noun => "NOUN",
            Self::Adj => "ADJ",
            Self::Prep => "PREP",
            Self::Det => "DET",
            Self::Quoted => "QUOTED",
            Self::Unknown => "UNKNOWN",
        })
    }
}

/// One lexical token. `span` is a byte range into the normalized request;
/// for quoted tokens it covers the quotes too.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub lexeme: String,
    pub kind: TokenKind,
    pub span: (usize, usize),
}

impl Token {
    pub fn new(lexeme: impl Into<String>, kind: TokenKind, span: (usize, usize)) -> Self {
        Self {
            lexeme: lexeme.into(),
            kind,
            span,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.lexeme, self.kind)
    }
}

/// Normalize one raw request: trim, collapse whitespace runs and lowercase,
/// except inside double-quoted segments which are kept verbatim.
pub fn read_request(raw: &str) -> Result<String, RpuError> {
    let mut out = String::with_capacity(raw.len());
    let mut quoted = false;
    let mut pending_space = false;
    for c in raw.trim().chars() {
        if quoted {
            out.push(c);
            if c == '"' {
                quoted = false;
            }
            continue;
        }
        if c.is_whitespace() {
            pending_space = true;
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        if c == '"' {
            quoted = true;
            out.push(c);
        } else {
            out.extend(c.to_lowercase());
        }
    }
    if out.is_empty() {
        return Err(RpuError::EmptyRequest);
    }
    Ok(out)
}

fn is_delimiter(c: char) -> bool {
    matches!(c, ' ' | '.' | ',' | ';' | ':' | '!' | '?' | '(' | ')')
}

/// Split normalized text into tokens and classify each word by the lexicon.
pub fn tokenize(text: &str, lexicon: &Lexicon) -> Result<Vec<Token>, RpuError> {
    let mut tokens = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some(&(start, c)) = iter.peek() {
        if is_delimiter(c) {
            iter.next();
            continue;
        }
        if c == '"' {
            iter.next();
            let body_start = start + 1;
            let end = loop {
                match iter.next() {
                    Some((i, '"')) => break i,
                    Some(_) => {}
                    None => return Err(RpuError::UnterminatedQuote { offset: start }),
                }
            };
            tokens.push(Token::new(&text[body_start..end], TokenKind::Quoted, (start, end + 1)));
            continue;
        }
        let mut end = start;
        while let Some(&(i, c)) = iter.peek() {
            if is_delimiter(c) || c == '"' {
                break;
            }
            end = i + c.len_utf8();
            iter.next();
        }
        let word = &text[start..end];
        let kind = lexicon
            .get(word)
            .map(|e| TokenKind::from(e.part_of_speech))
            .unwrap_or(TokenKind::Unknown);
        tokens.push(Token::new(word, kind, (start, end)));
    }
    Ok(tokens)
}
