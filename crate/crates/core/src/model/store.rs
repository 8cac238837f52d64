use std::collections::{BTreeMap, BTreeSet};

use super::{Bindings, PatternTerm, Term, Triple, TriplePattern};

/// A duplicate-free set of triples with predicate and object indexes.
///
/// The primary set is ordered by (subject, predicate, object), so a pattern
/// with a concrete subject is answered by a range scan. Patterns with only
/// a concrete predicate or object go through the secondary indexes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TripleStore {
    spo: BTreeSet<Triple>,
    by_predicate: BTreeMap<Term, BTreeSet<Triple>>,
    by_object: BTreeMap<Term, BTreeSet<Triple>>,
}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.spo.contains(&triple) {
            return false;
        }
        self.by_predicate
            .entry(triple.predicate().clone())
            .or_default()
            .insert(triple.clone());
        self.by_object
            .entry(triple.object().clone())
            .or_default()
            .insert(triple.clone());
        self.spo.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    /// All triples in (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.spo.iter()
    }

    /// All triples with the given subject, in order.
    pub fn with_subject<'a>(&'a self, subject: &'a Term) -> impl Iterator<Item = &'a Triple> + 'a {
        self.spo
            .range(Triple::lower_bound(subject)..)
            .take_while(move |t| t.subject() == subject)
    }

    /// Distinct subjects, in order.
    pub fn subjects(&self) -> Vec<&Term> {
        let mut out: Vec<&Term> = Vec::new();
        for t in &self.spo {
            if out.last() != Some(&t.subject()) {
                out.push(t.subject());
            }
        }
        out
    }

    /// One binding map per matching triple, in lexicographic triple order.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Bindings> {
        self.candidates(pattern)
            .filter_map(|t| pattern.matches(t))
            .collect()
    }

    /// Triples matching the pattern, in lexicographic order.
    pub fn matching_triples<'a>(
        &'a self,
        pattern: &'a TriplePattern,
    ) -> impl Iterator<Item = &'a Triple> + 'a {
        self.candidates(pattern)
            .filter(move |t| pattern.matches(t).is_some())
    }

    fn candidates<'a>(&'a self, pattern: &'a TriplePattern) -> Box<dyn Iterator<Item = &'a Triple> + 'a> {
        if let PatternTerm::Term(s) = &pattern.subject {
            return Box::new(self.with_subject(s));
        }
        if let PatternTerm::Term(p) = &pattern.predicate {
            return match self.by_predicate.get(p) {
                Some(set) => Box::new(set.iter()),
                None => Box::new(std::iter::empty()),
            };
        }
        if let PatternTerm::Term(o) = &pattern.object {
            return match self.by_object.get(o) {
                Some(set) => Box::new(set.iter()),
                None => Box::new(std::iter::empty()),
            };
        }
        Box::new(self.spo.iter())
    }
}

impl FromIterator<Triple> for TripleStore {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut store = Self::new();
        store.extend(iter);
        store
    }
}

impl Extend<Triple> for TripleStore {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl<'a> IntoIterator for &'a TripleStore {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.spo.iter()
    }
}
