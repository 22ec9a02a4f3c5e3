//! Word-substitution resources: embeddings, curated lexicon, inflection.

mod embeddings;
mod inflect;
mod numbers;
mod substitution;

pub use embeddings::{Direction, EmbeddingIndex, Neighbor};
pub use inflect::{Degree, InflectionTable, IrregularVerb, VerbForm};
pub use numbers::{number_word, parse_number, render_number, table as number_table, word_value, NumberForm};
pub use substitution::{Comparatives, Gender, SubstitutionLexicon};

use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::Token;
use crate::transforms::Polarity;

/// Neighbor count and cosine threshold for embedding fallbacks.
pub const NEIGHBOR_K: usize = 2;
pub const NEIGHBOR_THRESHOLD: f64 = 0.55;

pub const LEXICON_ENV: &str = "SDRO_LEXICON";
pub const EMBEDDINGS_ENV: &str = "SDRO_EMBEDDINGS";
pub const IRREGULAR_VERBS_ENV: &str = "SDRO_IRREGULAR_VERBS";

const BUILTIN_LEXICON: &str = include_str!("../../resources/lexicon.tsv");
const BUILTIN_EMBEDDINGS: &str = include_str!("../../resources/embeddings.50d.txt");
const BUILTIN_IRREGULAR: &str = include_str!("../../resources/irregular_verbs.tsv");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: vector has dimension {found}, expected {expected}")]
    DimMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: non-numeric component `{value}`")]
    NonNumeric { line: usize, value: String },
    #[error("line {line}: zero-norm vector for `{word}`")]
    ZeroVector { line: usize, word: String },
    #[error("out-of-vocabulary word `{0}`")]
    Oov(String),
    #[error("line {line}: `{word}` maps to itself")]
    SelfMapping { line: usize, word: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateSource {
    Curated,
    Embedding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub word: String,
    pub source: CandidateSource,
}

/// The full substitution toolkit used by the transforms.
#[derive(Clone, Debug)]
pub struct Lexicon {
    pub curated: SubstitutionLexicon,
    pub embeddings: EmbeddingIndex,
    pub inflection: InflectionTable,
    antonym_axis: Option<Vec<f64>>,
}

impl Lexicon {
    pub fn new(curated: SubstitutionLexicon, embeddings: EmbeddingIndex, inflection: InflectionTable) -> Self {
        let antonym_axis = embeddings.antonym_axis(curated.antonym_pairs());
        Lexicon {
            curated,
            embeddings,
            inflection,
            antonym_axis,
        }
    }

    /// Shipped resources, each overridable by a file path in
    /// `SDRO_LEXICON`, `SDRO_EMBEDDINGS` or `SDRO_IRREGULAR_VERBS`.
    pub fn builtin() -> Result<Self, LexiconError> {
        let path = |var: &str| std::env::var_os(var).map(PathBuf::from);
        let curated = match path(LEXICON_ENV) {
            Some(p) => SubstitutionLexicon::load(&p)?,
            None => SubstitutionLexicon::parse(BUILTIN_LEXICON)?,
        };
        let embeddings = match path(EMBEDDINGS_ENV) {
            Some(p) => EmbeddingIndex::load(&p)?,
            None => EmbeddingIndex::parse(BUILTIN_EMBEDDINGS)?,
        };
        let inflection = match path(IRREGULAR_VERBS_ENV) {
            Some(p) => InflectionTable::load(&p)?,
            None => InflectionTable::parse(BUILTIN_IRREGULAR)?,
        };
        Ok(Lexicon::new(curated, embeddings, inflection))
    }

    pub fn antonym_axis(&self) -> Option<&[f64]> {
        self.antonym_axis.as_deref()
    }

    fn lookup_key(token: &Token) -> String {
        let lemma = token.lemma_lower();
        if lemma.is_empty() || lemma == "_" {
            token.surface_lower()
        } else {
            lemma
        }
    }

    fn embedding_candidates(&self, word: &str, polarity: Polarity) -> Vec<String> {
        let found = match polarity {
            Polarity::SP => self.embeddings.neighbors(word, NEIGHBOR_K, NEIGHBOR_THRESHOLD, Direction::Nearest),
            Polarity::SI => self.embeddings.opposite_neighbors(
                word,
                NEIGHBOR_K,
                NEIGHBOR_THRESHOLD,
                self.antonym_axis(),
            ),
        };
        found
            .map(|ns| ns.into_iter().map(|n| n.word).collect())
            .unwrap_or_default()
    }

    /// Re-inflects a base-form replacement to match `token`.
    pub fn inflect_like(&self, word: &str, token: &Token) -> String {
        match token.upos.as_str() {
            "NOUN" if token.feat("Number") == Some("Plur") => self.inflection.pluralize(word),
            "VERB" => self.inflection.inflect(word, self.inflection.verb_form_of(token)),
            "ADJ" => self.inflection.adjective(word, InflectionTable::degree_of(token)),
            _ => word.to_owned(),
        }
    }

    /// Ranked replacement candidates for a NOUN, VERB or ADJ token, already
    /// inflected to the token's form. Curated entries come first, then
    /// embedding neighbors. Never returns the query word or a non-alphabetic
    /// string.
    pub fn candidates(&self, token: &Token, polarity: Polarity) -> Vec<Candidate> {
        if !matches!(token.upos.as_str(), "NOUN" | "VERB" | "ADJ") {
            return Vec::new();
        }
        let key = Self::lookup_key(token);
        let curated = match polarity {
            Polarity::SP => self.curated.synonyms_of(&key),
            Polarity::SI => self.curated.antonyms_of(&key),
        };
        let mut embedded = self.embedding_candidates(&key, polarity);
        if embedded.is_empty() && !self.embeddings.contains(&key) {
            embedded = self.embedding_candidates(&token.surface_lower(), polarity);
        }

        let surface = token.surface_lower();
        let mut out: Vec<Candidate> = Vec::new();
        let tagged = curated
            .iter()
            .map(|w| (w.as_str(), CandidateSource::Curated))
            .chain(embedded.iter().map(|w| (w.as_str(), CandidateSource::Embedding)));
        for (base, source) in tagged {
            if base == key {
                continue;
            }
            let word = self.inflect_like(base, token);
            if word.is_empty()
                || !word.chars().all(char::is_alphabetic)
                || word == surface
                || word == key
                || out.iter().any(|c| c.word == word)
            {
                continue;
            }
            out.push(Candidate { word, source });
        }
        out
    }

    pub fn substitute_candidates(&self, token: &Token, polarity: Polarity) -> Vec<String> {
        self.candidates(token, polarity).into_iter().map(|c| c.word).collect()
    }
}
