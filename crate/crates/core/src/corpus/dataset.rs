use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::conllu::{parse_conllu, write_sentence, AnnotatedSentence};
use super::{read_file, write_file, CorpusError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    True,
    False,
}

impl Label {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Label::True
        } else {
            Label::False
        }
    }

    pub fn as_bool(self) -> bool {
        matches!(self, Label::True)
    }

    pub fn flipped(self) -> Self {
        Label::from_bool(!self.as_bool())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::True => "True",
            Label::False => "False",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "True" => Some(Label::True),
            "False" => Some(Label::False),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Label::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad label `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "train" => Some(Split::Train),
            "val" => Some(Split::Val),
            "test" => Some(Split::Test),
            _ => None,
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fixed-length real-valued stand-in for the visual input.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextVector(pub Vec<f64>);

impl ContextVector {
    pub fn zeros(dim: usize) -> Self {
        ContextVector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub id: String,
    pub sentence_id: String,
    pub label: Label,
    pub context_id: String,
    pub split: Split,
}

#[derive(Serialize, Deserialize)]
struct SampleRecord {
    id: String,
    sentence_id: String,
    label: String,
    context_id: String,
    split: String,
}

/// Samples plus the sentence and context tables they reference.
///
/// Tables preserve insertion order so that serialization is byte-stable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    samples: Vec<Sample>,
    sentences: IndexMap<String, AnnotatedSentence>,
    contexts: IndexMap<String, ContextVector>,
}

pub const SAMPLES_FILE: &str = "samples.jsonl";
pub const SENTENCES_FILE: &str = "sentences.conllu";
pub const CONTEXTS_FILE: &str = "contexts.tsv";

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn sentences(&self) -> impl Iterator<Item = &AnnotatedSentence> {
        self.sentences.values()
    }

    pub fn sentence(&self, id: &str) -> Option<&AnnotatedSentence> {
        self.sentences.get(id)
    }

    pub fn context(&self, id: &str) -> Option<&ContextVector> {
        self.contexts.get(id)
    }

    pub fn sample(&self, id: &str) -> Option<&Sample> {
        self.samples.iter().find(|s| s.id == id)
    }

    /// The sentence a sample refers to. Panics only if the dataset was built
    /// bypassing [`Dataset::push_sample`].
    pub fn sentence_of(&self, sample: &Sample) -> &AnnotatedSentence {
        &self.sentences[sample.sentence_id.as_str()]
    }

    pub fn context_of(&self, sample: &Sample) -> &ContextVector {
        &self.contexts[sample.context_id.as_str()]
    }

    pub fn context_dim(&self) -> usize {
        self.contexts.values().next().map_or(0, ContextVector::dim)
    }

    pub fn add_sentence(&mut self, sentence: AnnotatedSentence) -> Result<(), CorpusError> {
        if self.sentences.contains_key(&sentence.id) {
            return Err(CorpusError::DuplicateId(sentence.id));
        }
        self.sentences.insert(sentence.id.clone(), sentence);
        Ok(())
    }

    pub fn add_context(&mut self, id: &str, context: ContextVector) -> Result<(), CorpusError> {
        if self.contexts.contains_key(id) {
            return Err(CorpusError::DuplicateId(id.to_owned()));
        }
        self.contexts.insert(id.to_owned(), context);
        Ok(())
    }

    pub fn push_sample(&mut self, sample: Sample) -> Result<(), CorpusError> {
        if !self.sentences.contains_key(&sample.sentence_id) {
            return Err(CorpusError::UnresolvedSentence {
                sample: sample.id,
                sentence: sample.sentence_id,
            });
        }
        if !self.contexts.contains_key(&sample.context_id) {
            return Err(CorpusError::UnresolvedContext {
                sample: sample.id,
                context: sample.context_id,
            });
        }
        if self.samples.iter().any(|s| s.id == sample.id) {
            return Err(CorpusError::DuplicateId(sample.id));
        }
        self.samples.push(sample);
        Ok(())
    }

    /// A new dataset holding the samples accepted by `keep`, in order, with
    /// only the table entries they reference.
    pub fn filter(&self, mut keep: impl FnMut(usize, &Sample) -> bool) -> Dataset {
        let mut out = Dataset::new();
        for (i, s) in self.samples.iter().enumerate() {
            if !keep(i, s) {
                continue;
            }
            if !out.sentences.contains_key(&s.sentence_id) {
                out.sentences
                    .insert(s.sentence_id.clone(), self.sentence_of(s).clone());
            }
            if !out.contexts.contains_key(&s.context_id) {
                out.contexts
                    .insert(s.context_id.clone(), self.context_of(s).clone());
            }
            out.samples.push(s.clone());
        }
        out
    }

    pub fn split(&self, split: Split) -> Dataset {
        self.filter(|_, s| s.split == split)
    }

    /// The first `round(frac * len)` samples in dataset order.
    pub fn head_fraction(&self, frac: f64) -> Dataset {
        let n = (frac.clamp(0.0, 1.0) * self.len() as f64).round() as usize;
        self.filter(|i, _| i < n)
    }

    pub fn samples_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.samples {
            let rec = SampleRecord {
                id: s.id.clone(),
                sentence_id: s.sentence_id.clone(),
                label: s.label.as_str().to_owned(),
                context_id: s.context_id.clone(),
                split: s.split.as_str().to_owned(),
            };
            out.push_str(&serde_json::to_string(&rec).expect("sample record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn sentences_conllu(&self) -> String {
        let mut out = String::new();
        for s in self.sentences.values() {
            write_sentence(&mut out, s);
        }
        out
    }

    pub fn contexts_tsv(&self) -> String {
        let mut out = String::new();
        for (id, ctx) in &self.contexts {
            out.push_str(id);
            out.push('\t');
            let vals: Vec<String> = ctx.0.iter().map(|v| v.to_string()).collect();
            out.push_str(&vals.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_parts(samples: &str, sentences: &str, contexts: &str) -> Result<Dataset, CorpusError> {
        let mut ds = Dataset::new();
        for sentence in parse_conllu(sentences)? {
            ds.add_sentence(sentence)?;
        }
        for (id, ctx) in parse_contexts(contexts)? {
            ds.add_context(&id, ctx)?;
        }
        for sample in parse_samples(samples)? {
            ds.push_sample(sample)?;
        }
        Ok(ds)
    }

    pub fn load(samples: &Path, sentences: &Path, contexts: &Path) -> Result<Dataset, CorpusError> {
        Self::from_parts(&read_file(samples)?, &read_file(sentences)?, &read_file(contexts)?)
    }

    pub fn write(&self, samples: &Path, sentences: &Path, contexts: &Path) -> Result<(), CorpusError> {
        write_file(samples, &self.samples_jsonl())?;
        write_file(sentences, &self.sentences_conllu())?;
        write_file(contexts, &self.contexts_tsv())
    }

    /// Loads `samples.jsonl`, `sentences.conllu` and `contexts.tsv` from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Dataset, CorpusError> {
        Self::load(
            &dir.join(SAMPLES_FILE),
            &dir.join(SENTENCES_FILE),
            &dir.join(CONTEXTS_FILE),
        )
    }

    pub fn write_dir(&self, dir: &Path) -> Result<(), CorpusError> {
        std::fs::create_dir_all(dir).map_err(|source| CorpusError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        self.write(
            &dir.join(SAMPLES_FILE),
            &dir.join(SENTENCES_FILE),
            &dir.join(CONTEXTS_FILE),
        )
    }
}

/// Parses line-delimited sample records. References are not resolved here.
pub fn parse_samples(text: &str) -> Result<Vec<Sample>, CorpusError> {
    let mut out: Vec<Sample> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SampleRecord = serde_json::from_str(line).map_err(|e| CorpusError::BadRecord {
            line: line_no,
            message: e.to_string(),
        })?;
        let label = Label::parse(&rec.label).ok_or_else(|| CorpusError::BadLabel {
            line: line_no,
            value: rec.label.clone(),
        })?;
        let split = Split::parse(&rec.split).ok_or_else(|| CorpusError::BadSplit {
            line: line_no,
            value: rec.split.clone(),
        })?;
        if !seen.insert(rec.id.clone()) {
            return Err(CorpusError::DuplicateId(rec.id));
        }
        out.push(Sample {
            id: rec.id,
            sentence_id: rec.sentence_id,
            label,
            context_id: rec.context_id,
            split,
        });
    }
    Ok(out)
}

/// Parses `context_id<TAB>f1 f2 ... fd` lines. All rows must share one dimension.
pub fn parse_contexts(text: &str) -> Result<Vec<(String, ContextVector)>, CorpusError> {
    let mut out: Vec<(String, ContextVector)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (id, rest) = line.split_once('\t').ok_or_else(|| CorpusError::BadContext {
            line: line_no,
            message: "missing tab separator".into(),
        })?;
        let values = rest
            .split_whitespace()
            .map(|v| {
                v.parse::<f64>().map_err(|_| CorpusError::BadContext {
                    line: line_no,
                    message: format!("non-numeric value `{v}`"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some((_, first)) = out.first() {
            if first.dim() != values.len() {
                return Err(CorpusError::BadContext {
                    line: line_no,
                    message: format!("dimension {} differs from {}", values.len(), first.dim()),
                });
            }
        }
        out.push((id.to_owned(), ContextVector(values)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SENTS: &str = "# sent_id = s1\n1\tCubes\tcube\tNOUN\t_\t_\t0\troot\t_\t_\n\n# sent_id = s2\n1\tSpheres\tsphere\tNOUN\t_\t_\t0\troot\t_\t_\n\n";
    const CTXS: &str = "c1\t1 0 0.5\nc2\t0 1 2\n";

    fn rec(id: &str, sent: &str, label: &str, ctx: &str) -> String {
        format!(
            "{{\"id\":\"{id}\",\"sentence_id\":\"{sent}\",\"label\":\"{label}\",\"context_id\":\"{ctx}\",\"split\":\"train\"}}\n"
        )
    }

    #[test]
    fn loads_in_file_order() {
        let samples = [
            rec("a", "s1", "True", "c1"),
            rec("b", "s2", "False", "c2"),
            rec("c", "s1", "False", "c2"),
        ]
        .concat();
        let ds = Dataset::from_parts(&samples, SENTS, CTXS).unwrap();
        let ids: Vec<_> = ds.samples().iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(ds.context_of(&ds.samples()[0]).0, vec![1.0, 0.0, 0.5]);
        assert_eq!(ds.samples_jsonl(), samples);
    }

    #[test]
    fn rejects_bad_label() {
        let samples = rec("a", "s1", "maybe", "c1");
        assert!(matches!(
            Dataset::from_parts(&samples, SENTS, CTXS),
            Err(CorpusError::BadLabel { .. })
        ));
    }

    #[test]
    fn rejects_unresolved_and_duplicates() {
        let missing = rec("a", "s9", "True", "c1");
        assert!(matches!(
            Dataset::from_parts(&missing, SENTS, CTXS),
            Err(CorpusError::UnresolvedSentence { .. })
        ));
        let missing_ctx = rec("a", "s1", "True", "c9");
        assert!(matches!(
            Dataset::from_parts(&missing_ctx, SENTS, CTXS),
            Err(CorpusError::UnresolvedContext { .. })
        ));
        let dup = [rec("a", "s1", "True", "c1"), rec("a", "s2", "True", "c1")].concat();
        assert!(matches!(
            Dataset::from_parts(&dup, SENTS, CTXS),
            Err(CorpusError::DuplicateId(_))
        ));
    }

    #[test]
    fn context_dimension_checked() {
        assert!(matches!(
            parse_contexts("c1\t1 2\nc2\t1\n"),
            Err(CorpusError::BadContext { line: 2, .. })
        ));
    }

    #[test]
    fn head_fraction_keeps_prefix() {
        let samples = [
            rec("a", "s1", "True", "c1"),
            rec("b", "s2", "False", "c2"),
            rec("c", "s1", "False", "c2"),
            rec("d", "s2", "True", "c1"),
        ]
        .concat();
        let ds = Dataset::from_parts(&samples, SENTS, CTXS).unwrap();
        let half = ds.head_fraction(0.5);
        assert_eq!(half.len(), 2);
        assert_eq!(half.samples()[1].id, "b");
    }
}
