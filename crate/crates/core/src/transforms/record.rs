//! JSON-lines storage for transformed samples.

use serde::{Deserialize, Serialize};

use super::{Category, Edit, Engine, Source, TransformedSample};
use crate::corpus::{CorpusError, Dataset, Label};

pub const TRANSFORMED_FILE: &str = "transformed.jsonl";

#[derive(Serialize, Deserialize)]
struct Record {
    origin_id: String,
    category: String,
    polarity: String,
    label: String,
    text: String,
    tokens: Vec<String>,
    edits: Vec<Edit>,
}

pub fn transformed_jsonl(items: &[TransformedSample]) -> String {
    let mut out = String::new();
    for t in items {
        let r = Record {
            origin_id: t.origin_id.clone(),
            category: t.category().name().to_owned(),
            polarity: t.tag.polarity.as_str().to_owned(),
            label: t.label.as_str().to_owned(),
            text: t.text.clone(),
            tokens: t.tokens.clone(),
            edits: t.edits.clone(),
        };
        out.push_str(&serde_json::to_string(&r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_transformed(text: &str) -> Result<Vec<TransformedSample>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| CorpusError::BadRecord { line: i + 1, message };
        let r: Record = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let category = Category::parse(&r.category).ok_or_else(|| bad(format!("unknown category `{}`", r.category)))?;
        let label = Label::parse(&r.label).ok_or_else(|| bad(format!("bad label `{}`", r.label)))?;
        if r.polarity != category.polarity().as_str() {
            return Err(bad(format!("polarity `{}` does not match {}", r.polarity, category)));
        }
        out.push(TransformedSample {
            origin_id: r.origin_id,
            tag: category.tag(),
            tokens: r.tokens,
            text: r.text,
            label,
            edits: r.edits,
        });
    }
    Ok(out)
}

/// Every applicable transform of every sample in dataset order, categories
/// in the order given. With `positives_only`, False samples are skipped.
pub fn transform_dataset(
    engine: &Engine,
    data: &Dataset,
    categories: &[Category],
    positives_only: bool,
    seed: u64,
) -> Vec<TransformedSample> {
    data.samples()
        .iter()
        .filter(|s| !positives_only || s.label == Label::True)
        .flat_map(|s| engine.apply_all(&Source::new(&s.id, data.sentence_of(s), s.label), categories, seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::Edit;

    #[test]
    fn roundtrip() {
        let t = TransformedSample {
            origin_id: "s1".into(),
            tag: Category::Negation.tag(),
            tokens: vec!["a".into(), "not".into(), "b".into()],
            text: "a not b".into(),
            label: Label::False,
            edits: vec![Edit::insert(1, vec!["not".into()])],
        };
        let text = transformed_jsonl(std::slice::from_ref(&t));
        assert_eq!(parse_transformed(&text).unwrap(), vec![t]);
        assert!(parse_transformed("{\"origin_id\":1}").is_err());
    }
}
