use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::{cased, Edit};
use crate::corpus::{AnnotatedSentence, Token};
use crate::lexicon::{Lexicon, VerbForm};

const NEGATORS: &[&str] = &["not", "n't", "never", "no"];

fn is_negated(sentence: &AnnotatedSentence, t: &Token) -> bool {
    sentence
        .children(t.index)
        .any(|c| NEGATORS.contains(&c.lemma_lower().as_str()) || NEGATORS.contains(&c.surface_lower().as_str()))
}

fn sites(sentence: &AnnotatedSentence) -> Vec<&Token> {
    let Some(root) = sentence.root() else {
        return Vec::new();
    };
    let mut out = vec![root];
    out.extend(sentence.children(root.index).filter(|c| c.deprel == "conj" && c.upos == "VERB"));
    out.retain(|t| !is_negated(sentence, t));
    out
}

fn negate_site(lex: &Lexicon, sentence: &AnnotatedSentence, t: &Token) -> Edit {
    let not = || vec!["not".to_owned()];
    let pos = t.index - 1;
    if t.lemma_lower() == "be" {
        return Edit::insert(pos + 1, not());
    }
    let aux = sentence
        .children(t.index)
        .find(|c| matches!(c.deprel.as_str(), "aux" | "aux:pass" | "cop") && c.index < t.index);
    if let Some(aux) = aux {
        return Edit::insert(aux.index, not());
    }
    if t.upos == "VERB" {
        let base = {
            let lemma = t.lemma_lower();
            if lemma.is_empty() || lemma == "_" {
                t.surface_lower()
            } else {
                lemma
            }
        };
        let support = match lex.inflection.verb_form_of(t) {
            VerbForm::Past => "did",
            VerbForm::ThirdSingular => "does",
            VerbForm::Base => "do",
            VerbForm::Gerund | VerbForm::Participle => return Edit::insert(pos, cased(sentence, pos, &["not"])),
        };
        return Edit::replace(pos, pos + 1, cased(sentence, pos, &[support, "not", &base]));
    }
    Edit::insert(pos, cased(sentence, pos, &["not"]))
}

pub(super) fn negate(lex: &Lexicon, sentence: &AnnotatedSentence, rng: &mut ChaCha8Rng) -> Option<Vec<Edit>> {
    let candidates = sites(sentence);
    let site = candidates.choose(rng)?;
    Some(vec![negate_site(lex, sentence, site)])
}
