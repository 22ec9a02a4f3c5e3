//! Paraphrases supplied from a sidecar table rather than generated.

use std::path::Path;

use indexmap::IndexMap;

use super::{diff_edit, Edit};
use crate::corpus::{detokenize, parse_conllu, write_conllu, AnnotatedSentence, CorpusError};

pub const PARAPHRASE_TSV_FILE: &str = "paraphrases.tsv";
pub const PARAPHRASE_CONLLU_FILE: &str = "paraphrases.conllu";

/// Sentence id → paraphrase, with the paraphrase's own annotation.
#[derive(Clone, Debug, Default)]
pub struct ParaphraseTable {
    entries: IndexMap<String, AnnotatedSentence>,
}

impl ParaphraseTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, sentence_id: &str) -> Option<&AnnotatedSentence> {
        self.entries.get(sentence_id)
    }

    /// Adds a paraphrase for `sentence_id`; the annotation's id is rewritten
    /// to match.
    pub fn insert(&mut self, sentence_id: &str, mut paraphrase: AnnotatedSentence) {
        paraphrase.id = sentence_id.to_owned();
        self.entries.insert(sentence_id.to_owned(), paraphrase);
    }

    /// Parses `sentence_id<TAB>paraphrase` lines together with a CoNLL-U
    /// document holding one sentence per paraphrase under the same id. The
    /// tokens must detokenize to the TSV text.
    pub fn parse(tsv: &str, conllu: &str) -> Result<Self, CorpusError> {
        let annotated: IndexMap<String, AnnotatedSentence> =
            parse_conllu(conllu)?.into_iter().map(|s| (s.id.clone(), s)).collect();
        let mut table = ParaphraseTable::new();
        for (i, line) in tsv.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (id, text) = line.split_once('\t').ok_or_else(|| CorpusError::BadRecord {
                line: line_no,
                message: "expected sentence_id<TAB>paraphrase".into(),
            })?;
            let sentence = annotated.get(id).ok_or_else(|| CorpusError::BadRecord {
                line: line_no,
                message: format!("no annotation for paraphrase `{id}`"),
            })?;
            let rebuilt = detokenize(&sentence.surfaces());
            if rebuilt != text.trim() {
                return Err(CorpusError::TextMismatch {
                    sent_id: id.to_owned(),
                    expected: text.trim().to_owned(),
                    found: rebuilt,
                });
            }
            if table.entries.contains_key(id) {
                return Err(CorpusError::DuplicateId(id.to_owned()));
            }
            table.insert(id, sentence.clone());
        }
        Ok(table)
    }

    pub fn load(tsv: &Path, conllu: &Path) -> Result<Self, CorpusError> {
        Self::parse(&crate::corpus::read_file(tsv)?, &crate::corpus::read_file(conllu)?)
    }

    /// Loads `paraphrases.tsv` and `paraphrases.conllu` from `dir` when both
    /// exist; an empty table otherwise.
    pub fn load_dir_if_present(dir: &Path) -> Result<Self, CorpusError> {
        let (tsv, conllu) = (dir.join(PARAPHRASE_TSV_FILE), dir.join(PARAPHRASE_CONLLU_FILE));
        if tsv.exists() && conllu.exists() {
            Self::load(&tsv, &conllu)
        } else {
            Ok(Self::new())
        }
    }

    pub fn to_tsv(&self) -> String {
        self.entries
            .iter()
            .map(|(id, s)| format!("{id}\t{}\n", s.text()))
            .collect()
    }

    pub fn to_conllu(&self) -> String {
        let sentences: Vec<AnnotatedSentence> = self.entries.values().cloned().collect();
        write_conllu(&sentences)
    }

    pub fn write_dir(&self, dir: &Path) -> Result<(), CorpusError> {
        crate::corpus::write_file(&dir.join(PARAPHRASE_TSV_FILE), &self.to_tsv())?;
        crate::corpus::write_file(&dir.join(PARAPHRASE_CONLLU_FILE), &self.to_conllu())
    }

    pub(super) fn edits_for(&self, sentence: &AnnotatedSentence) -> Option<Vec<Edit>> {
        let para = self.entries.get(&sentence.id)?;
        Some(vec![diff_edit(&sentence.surfaces(), &para.surfaces())])
    }
}
