//! Human noun phrases to pronouns, and pronouns to descriptors or to the
//! other gender.

use rand_chacha::ChaCha8Rng;

use super::{cased, pick_tiered, Edit, Polarity};
use crate::corpus::{AnnotatedSentence, Token};
use crate::lexicon::{Gender, Lexicon};

const DETACHED_RELS: &[&str] = &["acl", "relcl", "conj", "cc", "punct", "appos", "parataxis"];

fn object_form(subject: &str) -> &str {
    match subject {
        "she" => "her",
        "he" => "him",
        "they" => "them",
        "it" => "it",
        other => other,
    }
}

fn is_subject(t: &Token) -> bool {
    t.deprel.starts_with("nsubj") || t.deprel.starts_with("csubj")
}

fn collect_subtree(sentence: &AnnotatedSentence, index: usize, out: &mut Vec<usize>) {
    out.push(index);
    for c in sentence.children(index) {
        collect_subtree(sentence, c.index, out);
    }
}

/// 0-based `[start, end)` of the noun phrase headed by `head` (1-based).
fn noun_span(sentence: &AnnotatedSentence, head: usize) -> (usize, usize) {
    let mut members = vec![head];
    for c in sentence.children(head) {
        let base = c.deprel.split(':').next().unwrap_or("");
        if !DETACHED_RELS.contains(&base) {
            collect_subtree(sentence, c.index, &mut members);
        }
    }
    members.sort_unstable();
    let (lo, hi) = (members[0], *members.last().unwrap());
    if hi - lo + 1 == members.len() {
        return (lo - 1, hi);
    }
    // Not contiguous: fall back to determiner through noun.
    let start = sentence
        .children(head)
        .filter(|c| c.deprel == "det" && c.index < head)
        .map(|c| c.index)
        .min()
        .unwrap_or(head);
    (start - 1, head)
}

fn human_gender(lex: &Lexicon, t: &Token) -> Option<Gender> {
    if t.upos != "NOUN" {
        return None;
    }
    let g = lex
        .curated
        .gender_of(&t.lemma_lower())
        .or_else(|| lex.curated.gender_of(&t.surface_lower()))?;
    if t.feat("Number") == Some("Plur") {
        Some(Gender::PL)
    } else {
        Some(g)
    }
}

fn pronoun_replacement(t: &Token, polarity: Polarity) -> Option<&'static str> {
    let word = t.surface_lower();
    match polarity {
        Polarity::SP => match word.as_str() {
            "he" | "she" | "him" | "her" | "they" | "them" => Some("someone"),
            "it" => Some("something"),
            _ => None,
        },
        Polarity::SI => match word.as_str() {
            "he" => Some("she"),
            "she" => Some("he"),
            "him" => Some("her"),
            "her" => Some("him"),
            _ => None,
        },
    }
}

pub(super) fn substitute(
    lex: &Lexicon,
    sentence: &AnnotatedSentence,
    polarity: Polarity,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Edit>> {
    let mut tiers: [Vec<(usize, usize, String)>; 2] = [Vec::new(), Vec::new()];
    for (pos, t) in sentence.tokens.iter().enumerate() {
        if let Some(g) = human_gender(lex, t) {
            let target = match polarity {
                Polarity::SP => Some(g),
                Polarity::SI => g.opposite(),
            };
            let Some(pronoun) = target.and_then(|g| lex.curated.pronoun_for(g)) else {
                continue;
            };
            let pronoun = if is_subject(t) { pronoun } else { object_form(pronoun) };
            let (start, end) = noun_span(sentence, t.index);
            tiers[0].push((start, end, pronoun.to_owned()));
        } else if t.upos == "PRON" {
            if let Some(w) = pronoun_replacement(t, polarity) {
                tiers[1].push((pos, pos + 1, w.to_owned()));
            }
        }
    }
    let (start, end, word) = pick_tiered(&tiers, rng)?;
    Some(vec![Edit::replace(start, end, cased(sentence, start, &[&word]))])
}
