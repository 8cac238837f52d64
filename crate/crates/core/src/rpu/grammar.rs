//! Request grammar.
//!
//! ```text
//! request       := [VERB] object-phrase qualifier*
//! object-phrase := ADJ* NOUN+              (last NOUN is the head)
//! qualifier     := PREP ADJ* (NOUN | QUOTED)+
//! ```
//!
//! DET tokens are dropped and UNKNOWN tokens are set aside before the
//! grammar runs. Parsing is a single greedy left-to-right pass.

use super::tokenize::{Token, TokenKind};
use super::RpuError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qualifier {
    pub preposition: Token,
    /// `ADJ* (NOUN | QUOTED)+`; the last token is the value head.
    pub value: Vec<Token>,
}

impl Qualifier {
    pub fn head(&self) -> &Token {
        self.value.last().expect("qualifier value is non-empty")
    }
}

/// The recognized and verified part of a request, plus what was filtered out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizedContent {
    pub command: Option<Token>,
    pub object_phrase: Vec<Token>,
    pub qualifiers: Vec<Qualifier>,
    pub unrecognized: Vec<Token>,
}

impl RecognizedContent {
    pub fn head_noun(&self) -> &Token {
        self.object_phrase.last().expect("object phrase is non-empty")
    }
}

pub fn parse(tokens: &[Token]) -> Result<RecognizedContent, RpuError> {
    let mut unrecognized = Vec::new();
    let mut filtered = Vec::with_capacity(tokens.len());
    for t in tokens {
        match t.kind {
            TokenKind::Det => {}
            TokenKind::Unknown => unrecognized.push(t.clone()),
            _ => filtered.push(t.clone()),
        }
    }
    if !filtered.iter().any(|t| t.kind == TokenKind::Noun) {
        return Err(RpuError::NoObjectPhrase);
    }

    let mut rest = filtered.into_iter().peekable();
    let command = rest.next_if(|t| t.kind == TokenKind::Verb);

    let mut object_phrase = Vec::new();
    while let Some(t) = rest.next_if(|t| t.kind == TokenKind::Adj) {
        object_phrase.push(t);
    }
    let nouns_before = object_phrase.len();
    while let Some(t) = rest.next_if(|t| t.kind == TokenKind::Noun) {
        object_phrase.push(t);
    }
    if object_phrase.len() == nouns_before {
        return Err(RpuError::NoObjectPhrase);
    }

    let mut qualifiers = Vec::new();
    while let Some(t) = rest.next() {
        if t.kind != TokenKind::Prep {
            return Err(RpuError::UnexpectedToken {
                lexeme: t.lexeme,
                kind: t.kind,
                offset: t.span.0,
            });
        }
        let mut value = Vec::new();
        while let Some(a) = rest.next_if(|a| a.kind == TokenKind::Adj) {
            value.push(a);
        }
        let modifiers = value.len();
        while let Some(v) = rest.next_if(|v| matches!(v.kind, TokenKind::Noun | TokenKind::Quoted)) {
            value.push(v);
        }
        if value.len() == modifiers {
            return Err(RpuError::DanglingPreposition {
                lexeme: t.lexeme,
                offset: t.span.0,
            });
        }
        qualifiers.push(Qualifier {
            preposition: t,
            value,
        });
    }

    Ok(RecognizedContent {
        command,
        object_phrase,
        qualifiers,
        unrecognized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn toks(words: &[(&str, TokenKind)]) -> Vec<Token> {
        let mut offset = 0;
        words.iter()
            .map(|&(lexeme, kind)| {
                let t = Token::new(lexeme, kind, (offset, offset + lexeme.len()));
                offset += lexeme.len() + 1;
                t
            })
            .collect()
    }

    fn lexemes(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.lexeme.as_str()).collect()
    }

    #[test]
    fn fixture_query() {
        let tokens = toks(&[
            ("find", Verb),
            ("cheap", Adj),
            ("hotels", Noun),
            ("in", Prep),
            ("vienna", Noun),
        ]);
        let rc = parse(&tokens).unwrap();
        assert_eq!(rc.command.as_ref().unwrap().lexeme, "find");
        assert_eq!(lexemes(&rc.object_phrase), ["cheap", "hotels"]);
        assert_eq!(rc.qualifiers.len(), 1);
        assert_eq!(rc.qualifiers[0].preposition.lexeme, "in");
        assert_eq!(lexemes(&rc.qualifiers[0].value), ["vienna"]);
        assert!(rc.unrecognized.is_empty());
        assert_eq!(rc.head_noun().lexeme, "hotels");
    }

    #[test]
    fn unknown_is_diverted() {
        let tokens = toks(&[("find", Verb), ("xyzzy", Unknown), ("hotels", Noun)]);
        let rc = parse(&tokens).unwrap();
        assert_eq!(rc.command.as_ref().unwrap().lexeme, "find");
        assert_eq!(lexemes(&rc.object_phrase), ["hotels"]);
        assert!(rc.qualifiers.is_empty());
        assert_eq!(lexemes(&rc.unrecognized), ["xyzzy"]);
    }

    #[test]
    fn lone_preposition_has_no_object() {
        assert_eq!(parse(&toks(&[("in", Prep)])).unwrap_err(), RpuError::NoObjectPhrase);
        assert_eq!(parse(&[]).unwrap_err(), RpuError::NoObjectPhrase);
    }

    #[test]
    fn determiners_dropped() {
        let rc = parse(&toks(&[("the", Det), ("hotels", Noun), ("near", Prep), ("the", Det), ("pool", Noun)]))
            .unwrap();
        assert!(rc.command.is_none());
        assert_eq!(lexemes(&rc.object_phrase), ["hotels"]);
        assert_eq!(lexemes(&rc.qualifiers[0].value), ["pool"]);
    }

    #[test]
    fn dangling_preposition() {
        let err = parse(&toks(&[("hotels", Noun), ("in", Prep)])).unwrap_err();
        assert!(matches!(err, RpuError::DanglingPreposition { ref lexeme, .. } if lexeme == "in"));
        let err = parse(&toks(&[("hotels", Noun), ("with", Prep), ("cheap", Adj)])).unwrap_err();
        assert!(matches!(err, RpuError::DanglingPreposition { .. }));
        let err = parse(&toks(&[("hotels", Noun), ("in", Prep), ("near", Prep), ("vienna", Noun)])).unwrap_err();
        assert!(matches!(err, RpuError::DanglingPreposition { ref lexeme, .. } if lexeme == "in"));
    }

    #[test]
    fn object_phrase_must_come_first() {
        // a quoted value cannot stand in for the object noun
        let err = parse(&toks(&[("find", Verb), ("grand hotel", Quoted), ("in", Prep), ("vienna", Noun)]))
            .unwrap_err();
        assert_eq!(err, RpuError::NoObjectPhrase);
        let err = parse(&toks(&[("cheap", Adj), ("in", Prep), ("vienna", Noun)])).unwrap_err();
        assert_eq!(err, RpuError::NoObjectPhrase);
    }

    #[test]
    fn misplaced_tokens_are_rejected() {
        let err = parse(&toks(&[("hotels", Noun), ("cheap", Adj)])).unwrap_err();
        assert!(matches!(err, RpuError::UnexpectedToken { kind: Adj, .. }));
        let err = parse(&toks(&[("find", Verb), ("find", Verb), ("hotels", Noun)])).unwrap_err();
        assert_eq!(err, RpuError::NoObjectPhrase);
        let err = parse(&toks(&[("hotels", Noun), ("in", Prep), ("vienna", Noun), ("find", Verb)])).unwrap_err();
        assert!(matches!(err, RpuError::UnexpectedToken { kind: Verb, .. }));
    }

    #[test]
    fn greedy_qualifier_values() {
        let rc = parse(&toks(&[
            ("hotels", Noun),
            ("with", Prep),
            ("cheap", Adj),
            ("pool", Noun),
            ("named", Quoted),
            ("in", Prep),
            ("vienna", Noun),
        ]))
        .unwrap();
        assert_eq!(rc.qualifiers.len(), 2);
        assert_eq!(lexemes(&rc.qualifiers[0].value), ["cheap", "pool", "named"]);
        assert_eq!(rc.qualifiers[0].head().lexeme, "named");
    }

    #[test]
    fn multi_noun_object_phrase() {
        let rc = parse(&toks(&[("pool", Noun), ("hotels", Noun)])).unwrap();
        assert_eq!(rc.head_noun().lexeme, "hotels");
        assert_eq!(rc.object_phrase.len(), 2);
    }
}
