use std::collections::BTreeMap;
use std::fmt;

use super::{ModelError, Term, Triple};

/// Variable name to bound term.
pub type Bindings = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Term(Term),
    Var(String),
}

impl PatternTerm {
    /// A named variable; names match `[a-z][a-z0-9_]*`.
    pub fn var(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
        if ok {
            Ok(Self::Var(name))
        } else {
            Err(ModelError::InvalidVariable(name))
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Self::Term(t) => Some(t),
            Self::Var(_) => None,
        }
    }

    /// Resolve against existing bindings: a bound variable becomes concrete.
    pub fn substitute(&self, bindings: &Bindings) -> PatternTerm {
        match self {
            Self::Var(name) => match bindings.get(name) {
                Some(t) => Self::Term(t.clone()),
                None => self.clone(),
            },
            other => other.clone(),
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        Self::Term(t)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Term(t) => t.fmt(f),
            Self::Var(v) => write!(f, "?{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> Self {
        Self {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn substitute(&self, bindings: &Bindings) -> TriplePattern {
        Self {
            subject: self.subject.substitute(bindings),
            predicate: self.predicate.substitute(bindings),
            object: self.object.substitute(bindings),
        }
    }

    /// Match one triple, returning the bindings it produces. Repeated
    /// variables must bind equal terms.
    pub fn matches(&self, triple: &Triple) -> Option<Bindings> {
        let mut bindings = Bindings::new();
        for (pat, term) in [
            (&self.subject, triple.subject()),
            (&self.predicate, triple.predicate()),
            (&self.object, triple.object()),
        ] {
            match pat {
                PatternTerm::Term(t) => {
                    if t != term {
                        return None;
                    }
                }
                PatternTerm::Var(name) => match bindings.get(name) {
                    Some(bound) if bound != term => return None,
                    Some(_) => {}
                    None => {
                        bindings.insert(name.clone(), term.clone());
                    }
                },
            }
        }
        Some(bindings)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_names() {
        assert!(PatternTerm::var("a").is_ok());
        assert!(PatternTerm::var("agent_1").is_ok());
        assert!(PatternTerm::var("").is_err());
        assert!(PatternTerm::var("1a").is_err());
        assert!(PatternTerm::var("Agent").is_err());
        assert!(PatternTerm::var("a-b").is_err());
    }

    #[test]
    fn repeated_variable_requires_equal_terms() {
        let p = TriplePattern::new(
            PatternTerm::var("x").unwrap(),
            Term::iri("urn:p").unwrap(),
            PatternTerm::var("x").unwrap(),
        );
        let same = Triple::from_iris("urn:a", "urn:p", Term::iri("urn:a").unwrap());
        let diff = Triple::from_iris("urn:a", "urn:p", Term::iri("urn:b").unwrap());
        // a literal with the same text is a different term
        let lit = Triple::from_iris("urn:a", "urn:p", Term::literal("urn:a"));
        assert_eq!(p.matches(&same).unwrap().len(), 1);
        assert!(p.matches(&diff).is_none());
        assert!(p.matches(&lit).is_none());
    }
}
