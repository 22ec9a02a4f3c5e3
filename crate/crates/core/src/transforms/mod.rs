//! Rule-based sentence rewrites that either preserve (SP) or invert (SI) the
//! truth of a statement.

mod edit;
mod negation;
mod number;
mod paraphrase;
mod pronoun;
mod record;
mod substitute;
mod swap;

pub use edit::{apply_edits, diff_edit, Edit};
pub use paraphrase::{ParaphraseTable, PARAPHRASE_CONLLU_FILE, PARAPHRASE_TSV_FILE};
pub use record::{parse_transformed, transform_dataset, transformed_jsonl, TRANSFORMED_FILE};

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{detokenize, AnnotatedSentence, Label};
use crate::lexicon::Lexicon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    SP,
    SI,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::SP => "SP",
            Polarity::SI => "SI",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "SP" | "sp" => Some(Polarity::SP),
            "SI" | "si" => Some(Polarity::SI),
            _ => None,
        }
    }

    /// The label an output of this polarity carries.
    pub fn apply(self, label: Label) -> Label {
        match self {
            Polarity::SP => label,
            Polarity::SI => label.flipped(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    NounSub,
    VerbSub,
    ComparativeSub,
    NumberSub,
    PronounSub,
    Negation,
    SubjObjSwap,
    Paraphrase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TransformTag {
    pub family: Family,
    pub polarity: Polarity,
}

/// The thirteen transform categories. Declaration order is the canonical
/// order used for tie-breaking and reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    NounAntonym,
    VerbAntonym,
    ComparativeAntonym,
    NumberSi,
    PronounSi,
    SubjectObjectSwap,
    Negation,
    NounSynonym,
    VerbSynonym,
    ComparativeSynonym,
    NumberSp,
    PronounSp,
    Paraphrase,
}

pub const ALL_CATEGORIES: [Category; 13] = [
    Category::NounAntonym,
    Category::VerbAntonym,
    Category::ComparativeAntonym,
    Category::NumberSi,
    Category::PronounSi,
    Category::SubjectObjectSwap,
    Category::Negation,
    Category::NounSynonym,
    Category::VerbSynonym,
    Category::ComparativeSynonym,
    Category::NumberSp,
    Category::PronounSp,
    Category::Paraphrase,
];

impl Category {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn tag(self) -> TransformTag {
        use Category::*;
        let (family, polarity) = match self {
            NounAntonym => (Family::NounSub, Polarity::SI),
            VerbAntonym => (Family::VerbSub, Polarity::SI),
            ComparativeAntonym => (Family::ComparativeSub, Polarity::SI),
            NumberSi => (Family::NumberSub, Polarity::SI),
            PronounSi => (Family::PronounSub, Polarity::SI),
            SubjectObjectSwap => (Family::SubjObjSwap, Polarity::SI),
            Negation => (Family::Negation, Polarity::SI),
            NounSynonym => (Family::NounSub, Polarity::SP),
            VerbSynonym => (Family::VerbSub, Polarity::SP),
            ComparativeSynonym => (Family::ComparativeSub, Polarity::SP),
            NumberSp => (Family::NumberSub, Polarity::SP),
            PronounSp => (Family::PronounSub, Polarity::SP),
            Paraphrase => (Family::Paraphrase, Polarity::SP),
        };
        TransformTag { family, polarity }
    }

    pub fn polarity(self) -> Polarity {
        self.tag().polarity
    }

    pub fn name(self) -> &'static str {
        use Category::*;
        match self {
            NounAntonym => "noun-antonym",
            VerbAntonym => "verb-antonym",
            ComparativeAntonym => "comparative-antonym",
            NumberSi => "number-si",
            PronounSi => "pronoun-si",
            SubjectObjectSwap => "subject-object-swap",
            Negation => "negation",
            NounSynonym => "noun-synonym",
            VerbSynonym => "verb-synonym",
            ComparativeSynonym => "comparative-synonym",
            NumberSp => "number-sp",
            PronounSp => "pronoun-sp",
            Paraphrase => "paraphrase",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        ALL_CATEGORIES.iter().copied().find(|c| c.name() == s)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl TransformTag {
    pub fn category(self) -> Category {
        ALL_CATEGORIES
            .iter()
            .copied()
            .find(|c| c.tag() == self)
            .expect("Negation/SubjObjSwap are SI-only and Paraphrase is SP-only")
    }

    pub fn is_valid(self) -> bool {
        ALL_CATEGORIES.iter().any(|c| c.tag() == self)
    }
}

/// Which polarities a transform set draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Sp,
    Si,
    Both,
}

impl Scope {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Some(Scope::Sp),
            "si" => Some(Scope::Si),
            "both" => Some(Scope::Both),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Sp => "sp",
            Scope::Si => "si",
            Scope::Both => "both",
        }
    }

    pub fn categories(self) -> Vec<Category> {
        ALL_CATEGORIES
            .iter()
            .copied()
            .filter(|c| match self {
                Scope::Sp => c.polarity() == Polarity::SP,
                Scope::Si => c.polarity() == Polarity::SI,
                Scope::Both => true,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedSample {
    pub origin_id: String,
    pub tag: TransformTag,
    pub tokens: Vec<String>,
    pub text: String,
    pub label: Label,
    pub edits: Vec<Edit>,
}

impl TransformedSample {
    pub fn category(&self) -> Category {
        self.tag.category()
    }
}

/// A labeled sentence about to be transformed.
#[derive(Clone, Copy, Debug)]
pub struct Source<'a> {
    pub id: &'a str,
    pub sentence: &'a AnnotatedSentence,
    pub label: Label,
}

impl<'a> Source<'a> {
    pub fn new(id: &'a str, sentence: &'a AnnotatedSentence, label: Label) -> Self {
        Source { id, sentence, label }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Generator for the site draw of one (sample, category) pair.
pub(crate) fn site_rng(origin_id: &str, seed: u64, category: Category) -> ChaCha8Rng {
    let h = fnv1a(origin_id.as_bytes()) ^ seed.rotate_left(17) ^ ((category.index() as u64 + 1) << 56);
    ChaCha8Rng::seed_from_u64(h)
}

/// Uniform draw within the first non-empty tier.
pub(crate) fn pick_tiered<T: Clone>(tiers: &[Vec<T>], rng: &mut ChaCha8Rng) -> Option<T> {
    tiers.iter().find(|t| !t.is_empty())?.choose(rng).cloned()
}

pub(crate) fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub(crate) fn starts_upper(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

/// Replacement words for the token at 0-based `pos`, capitalized when they
/// take over a capitalized sentence-initial token.
pub(crate) fn cased(sentence: &AnnotatedSentence, pos: usize, words: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    if pos == 0 && starts_upper(&sentence.tokens[0].surface) {
        if let Some(first) = out.first_mut() {
            *first = capitalize(first);
        }
    }
    out
}

pub(crate) fn build(src: &Source, category: Category, mut edits: Vec<Edit>) -> TransformedSample {
    edits.sort_by_key(|e| (e.start, e.end));
    let origin = src.sentence.surfaces();
    let tokens = apply_edits(&origin, &edits);
    let tag = category.tag();
    TransformedSample {
        origin_id: src.id.to_owned(),
        tag,
        text: detokenize(&tokens),
        tokens,
        label: tag.polarity.apply(src.label),
        edits,
    }
}

/// The transform engine: lexical resources plus an optional paraphrase table.
#[derive(Clone, Debug)]
pub struct Engine {
    pub lexicon: Lexicon,
    pub paraphrases: ParaphraseTable,
}

impl Engine {
    pub fn new(lexicon: Lexicon) -> Self {
        Engine {
            lexicon,
            paraphrases: ParaphraseTable::default(),
        }
    }

    pub fn with_paraphrases(mut self, table: ParaphraseTable) -> Self {
        self.paraphrases = table;
        self
    }

    /// Output of a single category; at most one sample.
    pub fn apply(&self, category: Category, src: &Source, seed: u64) -> Option<TransformedSample> {
        let mut rng = site_rng(src.id, seed, category);
        let edits = match category {
            Category::NounAntonym => substitute::noun(&self.lexicon, src.sentence, Polarity::SI, &mut rng),
            Category::NounSynonym => substitute::noun(&self.lexicon, src.sentence, Polarity::SP, &mut rng),
            Category::VerbAntonym => substitute::verb(&self.lexicon, src.sentence, Polarity::SI, &mut rng),
            Category::VerbSynonym => substitute::verb(&self.lexicon, src.sentence, Polarity::SP, &mut rng),
            Category::ComparativeAntonym => {
                substitute::comparative(&self.lexicon, src.sentence, Polarity::SI, &mut rng)
            }
            Category::ComparativeSynonym => {
                substitute::comparative(&self.lexicon, src.sentence, Polarity::SP, &mut rng)
            }
            Category::NumberSi => number::substitute(src.sentence, Polarity::SI, &mut rng),
            Category::NumberSp => number::substitute(src.sentence, Polarity::SP, &mut rng),
            Category::PronounSi => pronoun::substitute(&self.lexicon, src.sentence, Polarity::SI, &mut rng),
            Category::PronounSp => pronoun::substitute(&self.lexicon, src.sentence, Polarity::SP, &mut rng),
            Category::Negation => negation::negate(&self.lexicon, src.sentence, &mut rng),
            Category::SubjectObjectSwap => swap::swap(src.sentence, &mut rng),
            Category::Paraphrase => self.paraphrases.edits_for(src.sentence),
        }?;
        if edits.is_empty() {
            return None;
        }
        Some(build(src, category, edits))
    }

    pub fn negate(&self, src: &Source, seed: u64) -> Vec<TransformedSample> {
        self.apply(Category::Negation, src, seed).into_iter().collect()
    }

    pub fn noun_substitute(&self, src: &Source, polarity: Polarity, seed: u64) -> Vec<TransformedSample> {
        let c = match polarity {
            Polarity::SP => Category::NounSynonym,
            Polarity::SI => Category::NounAntonym,
        };
        self.apply(c, src, seed).into_iter().collect()
    }

    pub fn verb_substitute(&self, src: &Source, polarity: Polarity, seed: u64) -> Vec<TransformedSample> {
        let c = match polarity {
            Polarity::SP => Category::VerbSynonym,
            Polarity::SI => Category::VerbAntonym,
        };
        self.apply(c, src, seed).into_iter().collect()
    }

    pub fn comparative_substitute(&self, src: &Source, polarity: Polarity, seed: u64) -> Vec<TransformedSample> {
        let c = match polarity {
            Polarity::SP => Category::ComparativeSynonym,
            Polarity::SI => Category::ComparativeAntonym,
        };
        self.apply(c, src, seed).into_iter().collect()
    }

    pub fn number_substitute(&self, src: &Source, polarity: Polarity, seed: u64) -> Vec<TransformedSample> {
        let c = match polarity {
            Polarity::SP => Category::NumberSp,
            Polarity::SI => Category::NumberSi,
        };
        self.apply(c, src, seed).into_iter().collect()
    }

    pub fn pronoun_substitute(&self, src: &Source, polarity: Polarity, seed: u64) -> Vec<TransformedSample> {
        let c = match polarity {
            Polarity::SP => Category::PronounSp,
            Polarity::SI => Category::PronounSi,
        };
        self.apply(c, src, seed).into_iter().collect()
    }

    pub fn subject_object_swap(&self, src: &Source, seed: u64) -> Vec<TransformedSample> {
        self.apply(Category::SubjectObjectSwap, src, seed).into_iter().collect()
    }

    pub fn paraphrase_lookup(&self, src: &Source) -> Vec<TransformedSample> {
        self.apply(Category::Paraphrase, src, 0).into_iter().collect()
    }

    /// One output per applicable category of `set`, in the order given.
    pub fn apply_all(&self, src: &Source, set: &[Category], seed: u64) -> Vec<TransformedSample> {
        set.iter().filter_map(|&c| self.apply(c, src, seed)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_categories_with_polarity_constraints() {
        assert_eq!(ALL_CATEGORIES.len(), 13);
        for (i, c) in ALL_CATEGORIES.iter().enumerate() {
            assert_eq!(c.index(), i);
            assert_eq!(c.tag().category(), *c);
            assert_eq!(Category::parse(c.name()), Some(*c));
        }
        let bad = [
            TransformTag { family: Family::Negation, polarity: Polarity::SP },
            TransformTag { family: Family::SubjObjSwap, polarity: Polarity::SP },
            TransformTag { family: Family::Paraphrase, polarity: Polarity::SI },
        ];
        for t in bad {
            assert!(!t.is_valid());
        }
        assert_eq!(Scope::Sp.categories().len(), 6);
        assert_eq!(Scope::Si.categories().len(), 7);
    }

    #[test]
    fn tiered_pick_prefers_first_tier() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tiers = vec![vec![], vec![4, 5], vec![9]];
        for _ in 0..20 {
            let v = pick_tiered(&tiers, &mut rng).unwrap();
            assert!(v == 4 || v == 5);
        }
        let empty: Vec<Vec<u8>> = vec![vec![], vec![]];
        assert_eq!(pick_tiered(&empty, &mut rng), None);
    }
}
