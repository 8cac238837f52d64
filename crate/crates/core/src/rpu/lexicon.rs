use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::model::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartOfSpeech {
    Verb,
    Noun,
    Adj,
    Prep,
    Det,
}

impl PartOfSpeech {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Verb => "VERB",
            Self::Noun => "NOUN",
            Self::Adj => "ADJ",
            Self::Prep => "PREP",
            Self::Det => "DET",
        }
    }
}

impl FromStr for PartOfSpeech {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "VERB" => Self::Verb,
            "NOUN" => Self::Noun,
            "ADJ" => Self::Adj,
            "PREP" => Self::Prep,
            "DET" => Self::Det,
            other => return Err(format!("unknown part of speech {other:?}")),
        })
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub lexeme: String,
    pub part_of_speech: PartOfSpeech,
    pub iri: Option<Term>,
    pub domain: Option<String>,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Closed vocabulary driving the tokenizer and the reconstructor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, LexiconEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entry: LexiconEntry) -> Result<(), String> {
        validate_entry(&entry)?;
        if self.entries.contains_key(&entry.lexeme) {
            return Err(format!("duplicate lexeme {:?}", entry.lexeme));
        }
        self.entries.insert(entry.lexeme.clone(), entry);
        Ok(())
    }

    pub fn get(&self, lexeme: &str) -> Option<&LexiconEntry> {
        self.entries.get(lexeme)
    }

    pub fn contains(&self, lexeme: &str) -> bool {
        self.entries.contains_key(lexeme)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parse the TSV form: `lexeme<TAB>POS<TAB>iri-or-"-"<TAB>domain-or-"-"`.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lexicon = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let invalid = |message: String| LexiconError::Invalid {
                line: idx + 1,
                message,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(invalid(format!(
                    "expected 4 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let part_of_speech = fields[1].parse().map_err(invalid)?;
            let iri = match fields[2] {
                "-" => None,
                s => Some(Term::iri(s).map_err(|e| invalid(e.to_string()))?),
            };
            let domain = match fields[3] {
                "-" => None,
                s => Some(s.to_string()),
            };
            let entry = LexiconEntry {
                lexeme: fields[0].to_string(),
                part_of_speech,
                iri,
                domain,
            };
            lexicon.insert(entry).map_err(invalid)?;
        }
        Ok(lexicon)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }
}

fn validate_entry(entry: &LexiconEntry) -> Result<(), String> {
    let lexeme = &entry.lexeme;
    if lexeme.is_empty() || lexeme.chars().any(char::is_whitespace) {
        return Err(format!("lexeme {lexeme:?} must be a single non-empty word"));
    }
    if lexeme.chars().any(char::is_uppercase) {
        return Err(format!("lexeme {lexeme:?} must be lowercase"));
    }
    if lexeme.contains('"') || lexeme.contains(['.', ',', ';', ':', '!', '?', '(', ')']) {
        return Err(format!("lexeme {lexeme:?} contains a delimiter"));
    }
    match entry.part_of_speech {
        PartOfSpeech::Verb | PartOfSpeech::Noun | PartOfSpeech::Adj if entry.iri.is_none() => {
            Err(format!("{} entry {lexeme:?} needs an IRI", entry.part_of_speech))
        }
        pos if pos != PartOfSpeech::Noun && entry.domain.is_some() => {
            Err(format!("only NOUN entries may carry a domain ({lexeme:?})"))
        }
        _ => Ok(()),
    }
}
