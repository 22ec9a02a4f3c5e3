use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::detok::detokenize;
use super::CorpusError;

/// A single token of a dependency-annotated sentence.
///
/// `index` is 1-based; `head` is 0 for the root and otherwise the 1-based
/// index of the governing token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    pub upos: String,
    pub feats: BTreeMap<String, String>,
    pub head: usize,
    pub deprel: String,
}

impl Token {
    pub fn new(index: usize, surface: &str, lemma: &str, upos: &str, head: usize, deprel: &str) -> Self {
        Token {
            index,
            surface: surface.to_owned(),
            lemma: lemma.to_owned(),
            upos: upos.to_owned(),
            feats: BTreeMap::new(),
            head,
            deprel: deprel.to_owned(),
        }
    }

    /// Builder-style helper taking a CoNLL-U FEATS string (`_` for none).
    pub fn with_feats(mut self, feats: &str) -> Self {
        self.feats = parse_feats(feats).unwrap_or_default();
        self
    }

    pub fn feat(&self, key: &str) -> Option<&str> {
        self.feats.get(key).map(String::as_str)
    }

    pub fn lemma_lower(&self) -> String {
        self.lemma.to_lowercase()
    }

    pub fn surface_lower(&self) -> String {
        self.surface.to_lowercase()
    }
}

/// A sentence with its gold (or externally produced) dependency annotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub id: String,
    pub raw_text: Option<String>,
    pub tokens: Vec<Token>,
    /// Fragments may have zero or several roots.
    pub fragment: bool,
}

impl AnnotatedSentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn surfaces(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.surface.clone()).collect()
    }

    /// Dependents of the token at `index` (1-based), in linear order.
    pub fn children(&self, index: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == index)
    }

    pub fn root(&self) -> Option<&Token> {
        self.tokens.iter().find(|t| t.head == 0)
    }

    pub fn text(&self) -> String {
        detokenize(&self.surfaces())
    }

    /// Checks the structural invariants that the parser does not enforce on
    /// its own: detokenized tokens must reproduce `raw_text` when present.
    pub fn check_text(&self) -> Result<(), CorpusError> {
        if let Some(raw) = &self.raw_text {
            let rebuilt = self.text();
            if &rebuilt != raw {
                return Err(CorpusError::TextMismatch {
                    sent_id: self.id.clone(),
                    expected: raw.clone(),
                    found: rebuilt,
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn parse_feats(field: &str) -> Option<BTreeMap<String, String>> {
    let mut feats = BTreeMap::new();
    if field == "_" || field.is_empty() {
        return Some(feats);
    }
    for pair in field.split('|') {
        let (k, v) = pair.split_once('=')?;
        if k.is_empty() || v.is_empty() {
            return None;
        }
        feats.insert(k.to_owned(), v.to_owned());
    }
    Some(feats)
}

fn format_feats(feats: &BTreeMap<String, String>) -> String {
    if feats.is_empty() {
        return "_".to_owned();
    }
    feats
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join("|")
}

#[derive(Default)]
struct Pending {
    id: Option<String>,
    text: Option<String>,
    fragment: bool,
    tokens: Vec<Token>,
    first_line: usize,
}

/// Parses a CoNLL-U document.
///
/// Only the ID, FORM, LEMMA, UPOS, FEATS, HEAD and DEPREL columns are kept.
/// Multiword-token ranges (`1-2`) and empty nodes (`1.1`) are rejected.
/// Sentences without a `# sent_id` comment are numbered `s1`, `s2`, ...
pub fn parse_conllu(text: &str) -> Result<Vec<AnnotatedSentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut pending = Pending::default();

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !pending.tokens.is_empty() {
                sentences.push(finish(std::mem::take(&mut pending), sentences.len())?);
            } else {
                pending = Pending::default();
            }
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "sent_id" => pending.id = Some(value.trim().to_owned()),
                    "text" => pending.text = Some(value.trim().to_owned()),
                    "fragment" => pending.fragment = value.trim() != "no",
                    _ => {}
                }
            } else if comment == "fragment" {
                pending.fragment = true;
            }
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(CorpusError::MalformedRow {
                line: lineno,
                columns: cols.len(),
            });
        }
        if cols[0].contains('-') {
            return Err(CorpusError::MultiwordToken { line: lineno });
        }
        if cols[0].contains('.') {
            return Err(CorpusError::EmptyNode { line: lineno });
        }
        let index: usize = cols[0].parse().map_err(|_| CorpusError::NonNumeric {
            line: lineno,
            column: "ID",
            value: cols[0].to_owned(),
        })?;
        let head: usize = cols[6].parse().map_err(|_| CorpusError::NonNumeric {
            line: lineno,
            column: "HEAD",
            value: cols[6].to_owned(),
        })?;
        let expected = pending.tokens.len() + 1;
        if index != expected {
            return Err(CorpusError::NonContiguous {
                line: lineno,
                expected,
                found: index,
            });
        }
        for (col, name) in [(1, "FORM"), (7, "DEPREL")] {
            if cols[col].is_empty() || (col == 7 && cols[col] == "_") {
                return Err(CorpusError::EmptyField {
                    line: lineno,
                    column: name,
                });
            }
        }
        let feats = parse_feats(cols[5]).ok_or_else(|| CorpusError::BadFeats {
            line: lineno,
            value: cols[5].to_owned(),
        })?;
        if pending.tokens.is_empty() {
            pending.first_line = lineno;
        }
        pending.tokens.push(Token {
            index,
            surface: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
            upos: cols[3].to_owned(),
            feats,
            head,
            deprel: cols[7].to_owned(),
        });
    }
    if !pending.tokens.is_empty() {
        sentences.push(finish(pending, sentences.len())?);
    }
    Ok(sentences)
}

fn finish(pending: Pending, ordinal: usize) -> Result<AnnotatedSentence, CorpusError> {
    let n = pending.tokens.len();
    let id = pending.id.unwrap_or_else(|| format!("s{}", ordinal + 1));
    for (offset, token) in pending.tokens.iter().enumerate() {
        if token.head > n {
            return Err(CorpusError::HeadOutOfRange {
                line: pending.first_line + offset,
                head: token.head,
                len: n,
            });
        }
    }
    let roots = pending.tokens.iter().filter(|t| t.head == 0).count();
    if roots != 1 && !pending.fragment {
        return Err(CorpusError::RootCount { sent_id: id, roots });
    }
    Ok(AnnotatedSentence {
        id,
        raw_text: pending.text,
        tokens: pending.tokens,
        fragment: pending.fragment,
    })
}

/// Serializes sentences back to CoNLL-U. XPOS, DEPS and MISC are written as `_`.
pub fn write_conllu(sentences: &[AnnotatedSentence]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        write_sentence(&mut out, sentence);
    }
    out
}

pub(crate) fn write_sentence(out: &mut String, sentence: &AnnotatedSentence) {
    let _ = writeln!(out, "# sent_id = {}", sentence.id);
    if let Some(text) = &sentence.raw_text {
        let _ = writeln!(out, "# text = {text}");
    }
    if sentence.fragment {
        let _ = writeln!(out, "# fragment = yes");
    }
    for t in &sentence.tokens {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t_\t{}\t{}\t{}\t_\t_",
            t.index,
            t.surface,
            if t.lemma.is_empty() { "_" } else { &t.lemma },
            if t.upos.is_empty() { "_" } else { &t.upos },
            format_feats(&t.feats),
            t.head,
            t.deprel
        );
    }
    out.push('\n');
}
