//! Exchange the head of the subject with the head of an object. Modifiers
//! stay where they are.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::{capitalize, starts_upper, Edit};
use crate::corpus::{AnnotatedSentence, Token};

const NOMINAL: &[&str] = &["NOUN", "PROPN", "PRON"];

fn is_subject(t: &Token) -> bool {
    matches!(t.deprel.as_str(), "nsubj" | "nsubj:pass" | "nsubjpass" | "csubj" | "csubj:pass")
        && NOMINAL.contains(&t.upos.as_str())
}

/// Objects of `predicate`: direct objects left to right, then obliques
/// right to left.
fn partners(sentence: &AnnotatedSentence, predicate: usize) -> Vec<&Token> {
    let children: Vec<&Token> = sentence
        .children(predicate)
        .filter(|c| NOMINAL.contains(&c.upos.as_str()))
        .collect();
    let base = |t: &Token| t.deprel.split(':').next().unwrap_or("").to_owned();
    let mut out: Vec<&Token> = children
        .iter()
        .copied()
        .filter(|c| matches!(base(c).as_str(), "obj" | "dobj" | "iobj"))
        .collect();
    out.extend(
        children
            .iter()
            .rev()
            .copied()
            .filter(|c| matches!(base(c).as_str(), "obl" | "nmod" | "pobj")),
    );
    out
}

fn moved(word: &Token, into: &Token) -> String {
    if into.index == 1 && starts_upper(&into.surface) {
        capitalize(&word.surface)
    } else if word.index == 1 && word.upos != "PROPN" && word.surface != "I" {
        word.surface.to_lowercase()
    } else {
        word.surface.clone()
    }
}

pub(super) fn swap(sentence: &AnnotatedSentence, rng: &mut ChaCha8Rng) -> Option<Vec<Edit>> {
    let pairs: Vec<(&Token, &Token)> = sentence
        .tokens
        .iter()
        .filter(|t| is_subject(t))
        .filter_map(|s| {
            partners(sentence, s.head)
                .into_iter()
                .find(|o| o.index != s.index && o.surface_lower() != s.surface_lower())
                .map(|o| (s, o))
        })
        .collect();
    let (s, o) = *pairs.choose(rng)?;
    let mut edits = vec![
        Edit::replace(s.index - 1, s.index, vec![moved(o, s)]),
        Edit::replace(o.index - 1, o.index, vec![moved(s, o)]),
    ];
    edits.sort_by_key(|e| e.start);
    Some(edits)
}
