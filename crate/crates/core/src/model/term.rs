use std::cmp::Ordering;
use std::fmt;

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Iri,
    Literal,
}

/// An RDF term: an absolute IRI or a plain literal.
///
/// Terms order by their string value first and kind second, so sorting
/// triples yields the lexicographic (subject, predicate, object) order
/// that every pattern match reports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    kind: TermKind,
    value: String,
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, ModelError> {
        let value = value.into();
        if !is_valid_iri(&value) {
            return Err(ModelError::InvalidIri(value));
        }
        Ok(Self {
            kind: TermKind::Iri,
            value,
        })
    }

    pub fn literal(value: impl Into<String>) -> Self {
        Self {
            kind: TermKind::Literal,
            value: value.into(),
        }
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn is_iri(&self) -> bool {
        self.kind == TermKind::Iri
    }

    pub fn is_literal(&self) -> bool {
        self.kind == TermKind::Literal
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| self.kind.cmp(&other.kind))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => write!(f, "<{}>", self.value),
            TermKind::Literal => {
                f.write_str("\"")?;
                for c in self.value.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

/// Absolute IRI check: `scheme ":" rest`, no whitespace, no angle brackets.
pub(crate) fn is_valid_iri(value: &str) -> bool {
    if value.is_empty() || value.chars().any(|c| c.is_whitespace() || c == '<' || c == '>') {
        return false;
    }
    let Some((scheme, _)) = value.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

/// A subject-predicate-object fact. Subject and predicate are always IRIs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, ModelError> {
        if !subject.is_iri() {
            return Err(ModelError::InvalidTriple("subject"));
        }
        if !predicate.is_iri() {
            return Err(ModelError::InvalidTriple("predicate"));
        }
        Ok(Self {
            subject,
            predicate,
            object,
        })
    }

    /// Convenience constructor for IRI strings that are known to be valid.
    ///
    /// Panics if `subject` or `predicate` is not a valid IRI.
    pub fn from_iris(subject: &str, predicate: &str, object: Term) -> Self {
        Self::new(
            Term::iri(subject).expect("valid subject IRI"),
            Term::iri(predicate).expect("valid predicate IRI"),
            object,
        )
        .expect("IRI subject and predicate")
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    /// Smallest triple with the given subject under the store ordering.
    pub(crate) fn lower_bound(subject: &Term) -> Self {
        let min = Term {
            kind: TermKind::Iri,
            value: String::new(),
        };
        Self {
            subject: subject.clone(),
            predicate: min.clone(),
            object: min,
        }
    }

    /// Canonical one-line form: `<s> <p> <o> .`
    pub fn to_line(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_validation() {
        assert!(Term::iri("urn:soas:Hotel").is_ok());
        assert!(Term::iri("tcp://127.0.0.1:7101").is_ok());
        assert!(Term::iri("").is_err());
        assert!(Term::iri("no scheme").is_err());
        assert!(Term::iri("noscheme").is_err());
        assert!(Term::iri("1abc:x").is_err());
        assert!(Term::iri("urn:a b").is_err());
    }

    #[test]
    fn literal_may_be_empty() {
        assert_eq!(Term::literal("").value(), "");
    }

    #[test]
    fn literal_subject_rejected() {
        let err = Triple::new(
            Term::literal("x"),
            Term::iri("urn:p").unwrap(),
            Term::literal("y"),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::InvalidTriple("subject"));
        let err = Triple::new(
            Term::iri("urn:s").unwrap(),
            Term::literal("p"),
            Term::literal("y"),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::InvalidTriple("predicate"));
    }

    #[test]
    fn ordering_is_by_value_then_kind() {
        let iri = Term::iri("urn:x").unwrap();
        let lit = Term::literal("urn:x");
        assert!(iri < lit);
        assert!(Term::literal("a") < Term::iri("b:c").unwrap());
    }

    #[test]
    fn display_escapes_literals() {
        let t = Triple::from_iris("urn:s", "urn:p", Term::literal(r#"say "hi" \ bye"#));
        assert_eq!(t.to_line(), r#"<urn:s> <urn:p> "say \"hi\" \\ bye" ."#);
    }
}
