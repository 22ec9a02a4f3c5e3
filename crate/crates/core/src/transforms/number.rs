//! Numeral rewrites.
//!
//! SP: a number word n becomes "less than" the word for n+5; a digit n
//! becomes "more than" the word for n−1. SI: one and two become "less than"
//! themselves, anything else jumps by eight (up to twelve, down above it).

use rand_chacha::ChaCha8Rng;

use super::{cased, pick_tiered, Edit, Polarity};
use crate::corpus::AnnotatedSentence;
use crate::lexicon::{number_word, parse_number, render_number, NumberForm};

const CORE_HEAD_RELS: &[&str] = &["nsubj", "nsubj:pass", "nsubjpass", "obj", "dobj", "iobj", "root", "attr"];

pub fn preserving(n: u32, form: NumberForm) -> Vec<String> {
    let words: Vec<String> = match form {
        NumberForm::Word => match number_word(n + 5) {
            Some(w) => vec!["less".into(), "than".into(), w.into()],
            None => vec![n.to_string()],
        },
        NumberForm::Digits if n >= 1 => {
            vec!["more".into(), "than".into(), render_number(n - 1, NumberForm::Word)]
        }
        NumberForm::Digits => vec![render_number(n, NumberForm::Word)],
    };
    words
}

pub fn inverting(n: u32, form: NumberForm) -> Vec<String> {
    match n {
        1 | 2 => vec!["less".into(), "than".into(), render_number(n, form)],
        _ => {
            let d = if n <= 12 { n + 8 } else { n - 8 };
            vec![render_number(d, form)]
        }
    }
}

pub(super) fn substitute(sentence: &AnnotatedSentence, polarity: Polarity, rng: &mut ChaCha8Rng) -> Option<Vec<Edit>> {
    let mut tiers: [Vec<(usize, u32, NumberForm)>; 2] = [Vec::new(), Vec::new()];
    for (pos, t) in sentence.tokens.iter().enumerate() {
        if t.upos != "NUM" || t.deprel != "nummod" {
            continue;
        }
        let Some((n, form)) = parse_number(&t.surface) else {
            continue;
        };
        if pos > 0 && sentence.tokens[pos - 1].surface_lower() == "than" {
            continue;
        }
        let core = sentence
            .token(t.head)
            .is_some_and(|h| CORE_HEAD_RELS.contains(&h.deprel.as_str()));
        tiers[usize::from(!core)].push((pos, n, form));
    }
    let (pos, n, form) = pick_tiered(&tiers, rng)?;
    let words = match polarity {
        Polarity::SP => preserving(n, form),
        Polarity::SI => inverting(n, form),
    };
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    Some(vec![Edit::replace(pos, pos + 1, cased(sentence, pos, &refs))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_match_worked_examples() {
        assert_eq!(inverting(3, NumberForm::Word), ["eleven"]);
        assert_eq!(inverting(2, NumberForm::Word), ["less", "than", "two"]);
        assert_eq!(inverting(20, NumberForm::Digits), ["12"]);
        assert_eq!(preserving(2, NumberForm::Word), ["less", "than", "seven"]);
        assert_eq!(preserving(3, NumberForm::Digits), ["more", "than", "two"]);
        assert_eq!(preserving(100, NumberForm::Word), ["100"]);
    }

    #[test]
    fn inverting_never_keeps_the_value() {
        for n in 0..200 {
            for form in [NumberForm::Word, NumberForm::Digits] {
                let out = inverting(n, form);
                if out.len() == 1 {
                    assert_ne!(parse_number(&out[0]).map(|p| p.0), Some(n));
                }
            }
        }
    }
}
