//! Noun, verb and comparative substitution.

use rand_chacha::ChaCha8Rng;

use super::{cased, pick_tiered, Edit, Polarity};
use crate::corpus::{AnnotatedSentence, Token};
use crate::lexicon::{CandidateSource, InflectionTable, Lexicon};

const NOUN_RELS: &[&str] = &["nsubj", "nsubj:pass", "nsubjpass", "obj", "dobj", "iobj", "obl", "pobj"];
const LIGHT_VERBS: &[&str] = &["be", "have", "do"];
const ADJ_RELS: &[&str] = &["amod", "acomp", "xcomp", "root", "conj", "advmod", "ccomp"];

fn rel_base(deprel: &str) -> &str {
    deprel.split(':').next().unwrap_or(deprel)
}

fn is_noun_site(t: &Token) -> bool {
    t.upos == "NOUN" && (NOUN_RELS.contains(&t.deprel.as_str()) || rel_base(&t.deprel) == "obl")
}

fn is_verb_site(t: &Token) -> bool {
    t.upos == "VERB" && !LIGHT_VERBS.contains(&t.lemma_lower().as_str()) && !matches!(rel_base(&t.deprel), "aux" | "cop")
}

fn is_adj_site(t: &Token) -> bool {
    t.upos == "ADJ" && ADJ_RELS.contains(&rel_base(&t.deprel))
}

/// Sites bucketed by where their rank-1 candidate comes from: curated
/// entries first, embedding neighbors second.
fn tiered_sites(
    sentence: &AnnotatedSentence,
    is_site: impl Fn(&Token) -> bool,
    best: impl Fn(&Token) -> Option<(String, CandidateSource)>,
) -> [Vec<(usize, String)>; 2] {
    let mut tiers: [Vec<(usize, String)>; 2] = [Vec::new(), Vec::new()];
    for (pos, t) in sentence.tokens.iter().enumerate() {
        if !is_site(t) {
            continue;
        }
        if let Some((word, source)) = best(t) {
            let tier = match source {
                CandidateSource::Curated => 0,
                CandidateSource::Embedding => 1,
            };
            tiers[tier].push((pos, word));
        }
    }
    tiers
}

fn single_edit(sentence: &AnnotatedSentence, choice: Option<(usize, String)>) -> Option<Vec<Edit>> {
    let (pos, word) = choice?;
    Some(vec![Edit::replace(pos, pos + 1, cased(sentence, pos, &[&word]))])
}

fn rank1(lex: &Lexicon, t: &Token, polarity: Polarity) -> Option<(String, CandidateSource)> {
    lex.candidates(t, polarity).into_iter().next().map(|c| (c.word, c.source))
}

pub(super) fn noun(
    lex: &Lexicon,
    sentence: &AnnotatedSentence,
    polarity: Polarity,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Edit>> {
    let tiers = tiered_sites(sentence, is_noun_site, |t| rank1(lex, t, polarity));
    single_edit(sentence, pick_tiered(&tiers, rng))
}

pub(super) fn verb(
    lex: &Lexicon,
    sentence: &AnnotatedSentence,
    polarity: Polarity,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Edit>> {
    let tiers = tiered_sites(sentence, is_verb_site, |t| rank1(lex, t, polarity));
    single_edit(sentence, pick_tiered(&tiers, rng))
}

/// Comparative lexicon by surface form, then by lemma re-inflected to the
/// token's degree, then the general adjective candidates.
fn comparative_candidate(lex: &Lexicon, t: &Token, polarity: Polarity) -> Option<(String, CandidateSource)> {
    let surface = t.surface_lower();
    let pick = |key: &str| {
        lex.curated.comparatives.get(key).and_then(|c| {
            let list = match polarity {
                Polarity::SP => &c.synonyms,
                Polarity::SI => &c.antonyms,
            };
            list.first().cloned()
        })
    };
    if let Some(w) = pick(&surface) {
        return Some((w, CandidateSource::Curated));
    }
    let lemma = t.lemma_lower();
    if lemma != surface {
        if let Some(w) = pick(&lemma) {
            let w = lex.inflection.adjective(&w, InflectionTable::degree_of(t));
            if w != surface {
                return Some((w, CandidateSource::Curated));
            }
        }
    }
    rank1(lex, t, polarity)
}

pub(super) fn comparative(
    lex: &Lexicon,
    sentence: &AnnotatedSentence,
    polarity: Polarity,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Edit>> {
    let tiers = tiered_sites(sentence, is_adj_site, |t| comparative_candidate(lex, t, polarity));
    single_edit(sentence, pick_tiered(&tiers, rng))
}
