//! Annotated-sentence ingestion and dataset bundles.

mod conllu;
mod dataset;
mod detok;

pub use conllu::{parse_conllu, write_conllu, AnnotatedSentence, Token};
pub use dataset::{ContextVector, Dataset, Label, Sample, Split};
pub use detok::detokenize;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: expected 10 tab-separated columns, found {columns}")]
    MalformedRow { line: usize, columns: usize },
    #[error("line {line}: non-numeric {column} `{value}`")]
    NonNumeric {
        line: usize,
        column: &'static str,
        value: String,
    },
    #[error("line {line}: head {head} out of range for sentence of length {len}")]
    HeadOutOfRange { line: usize, head: usize, len: usize },
    #[error("line {line}: multiword token ranges are not supported")]
    MultiwordToken { line: usize },
    #[error("line {line}: empty nodes are not supported")]
    EmptyNode { line: usize },
    #[error("line {line}: expected token id {expected}, found {found}")]
    NonContiguous {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: empty {column}")]
    EmptyField { line: usize, column: &'static str },
    #[error("line {line}: malformed FEATS `{value}`")]
    BadFeats { line: usize, value: String },
    #[error("sentence {sent_id}: expected exactly one root, found {roots}")]
    RootCount { sent_id: String, roots: usize },
    #[error("sentence {sent_id}: tokens detokenize to `{found}`, text is `{expected}`")]
    TextMismatch {
        sent_id: String,
        expected: String,
        found: String,
    },
    #[error("line {line}: bad label `{value}` (expected True or False)")]
    BadLabel { line: usize, value: String },
    #[error("line {line}: bad split `{value}` (expected train, val or test)")]
    BadSplit { line: usize, value: String },
    #[error("line {line}: {message}")]
    BadRecord { line: usize, message: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("sample {sample}: unresolved sentence `{sentence}`")]
    UnresolvedSentence { sample: String, sentence: String },
    #[error("sample {sample}: unresolved context `{context}`")]
    UnresolvedContext { sample: String, context: String },
    #[error("context table line {line}: {message}")]
    BadContext { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CorpusError> {
    std::fs::write(path, contents).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}
