//! English verb, noun and adjective inflection.
//!
//! Irregular entries always win; regular suffix rules cover the rest
//! (e-drop, consonant doubling for single-syllable CVC stems, y → i).

use std::collections::HashMap;
use std::path::Path;

use crate::corpus::Token;

use super::LexiconError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerbForm {
    Base,
    ThirdSingular,
    Past,
    Gerund,
    Participle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Positive,
    Comparative,
    Superlative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularVerb {
    pub past: String,
    pub participle: String,
    pub third_singular: String,
    pub gerund: String,
}

const IRREGULAR_NOUNS: &[(&str, &str)] = &[
    ("man", "men"),
    ("woman", "women"),
    ("child", "children"),
    ("person", "people"),
    ("foot", "feet"),
    ("tooth", "teeth"),
    ("mouse", "mice"),
    ("goose", "geese"),
    ("ox", "oxen"),
    ("knife", "knives"),
    ("leaf", "leaves"),
    ("shelf", "shelves"),
    ("wife", "wives"),
    ("sheep", "sheep"),
    ("fish", "fish"),
    ("deer", "deer"),
    ("people", "people"),
];

const IRREGULAR_ADJECTIVES: &[(&str, &str, &str)] = &[
    ("good", "better", "best"),
    ("bad", "worse", "worst"),
    ("many", "more", "most"),
    ("much", "more", "most"),
    ("little", "less", "least"),
    ("far", "farther", "farthest"),
];

#[derive(Clone, Debug, Default)]
pub struct InflectionTable {
    irregular: HashMap<String, IrregularVerb>,
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn vowel_groups(word: &str) -> usize {
    let mut groups = 0;
    let mut prev = false;
    for (i, c) in word.chars().enumerate() {
        let v = is_vowel(c) || (c == 'y' && i > 0);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    groups
}

/// Single-syllable stem ending consonant–vowel–consonant, final not w/x/y.
fn doubles_final(word: &str) -> bool {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    if n < 3 || vowel_groups(word) != 1 {
        return false;
    }
    let (a, b, c) = (chars[n - 3], chars[n - 2], chars[n - 1]);
    !is_vowel(a) && is_vowel(b) && !is_vowel(c) && !matches!(c, 'w' | 'x' | 'y')
}

fn consonant_y(word: &str) -> bool {
    let chars: Vec<char> = word.chars().collect();
    chars.len() >= 2 && chars[chars.len() - 1] == 'y' && !is_vowel(chars[chars.len() - 2])
}

fn sibilant(word: &str) -> bool {
    ["s", "x", "z", "ch", "sh"].iter().any(|s| word.ends_with(s))
}

impl InflectionTable {
    /// Parses `lemma<TAB>past<TAB>participle<TAB>3sg<TAB>gerund` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut irregular = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() != 5 || cols.iter().any(|c| c.is_empty()) {
                return Err(LexiconError::Malformed {
                    line: i + 1,
                    message: format!("expected 5 columns, found {}", cols.len()),
                });
            }
            irregular.entry(cols[0].to_lowercase()).or_insert(IrregularVerb {
                past: cols[1].to_lowercase(),
                participle: cols[2].to_lowercase(),
                third_singular: cols[3].to_lowercase(),
                gerund: cols[4].to_lowercase(),
            });
        }
        Ok(InflectionTable { irregular })
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn irregular(&self, lemma: &str) -> Option<&IrregularVerb> {
        self.irregular.get(lemma)
    }

    pub fn inflect(&self, lemma: &str, form: VerbForm) -> String {
        let lemma = lemma.to_lowercase();
        if form == VerbForm::Base {
            return lemma;
        }
        if let Some(irr) = self.irregular.get(&lemma) {
            return match form {
                VerbForm::Past => irr.past.clone(),
                VerbForm::Participle => irr.participle.clone(),
                VerbForm::ThirdSingular => irr.third_singular.clone(),
                VerbForm::Gerund => irr.gerund.clone(),
                VerbForm::Base => unreachable!(),
            };
        }
        match form {
            VerbForm::ThirdSingular => {
                if consonant_y(&lemma) {
                    format!("{}ies", &lemma[..lemma.len() - 1])
                } else if sibilant(&lemma) || lemma.ends_with('o') {
                    format!("{lemma}es")
                } else {
                    format!("{lemma}s")
                }
            }
            VerbForm::Past | VerbForm::Participle => {
                if lemma.ends_with('e') {
                    format!("{lemma}d")
                } else if consonant_y(&lemma) {
                    format!("{}ied", &lemma[..lemma.len() - 1])
                } else if doubles_final(&lemma) {
                    let last = lemma.chars().last().unwrap();
                    format!("{lemma}{last}ed")
                } else {
                    format!("{lemma}ed")
                }
            }
            VerbForm::Gerund => {
                if lemma.ends_with("ie") {
                    format!("{}ying", &lemma[..lemma.len() - 2])
                } else if lemma.ends_with('e')
                    && lemma.len() > 2
                    && !["ee", "ye", "oe"].iter().any(|s| lemma.ends_with(s))
                {
                    format!("{}ing", &lemma[..lemma.len() - 1])
                } else if doubles_final(&lemma) {
                    let last = lemma.chars().last().unwrap();
                    format!("{lemma}{last}ing")
                } else {
                    format!("{lemma}ing")
                }
            }
            VerbForm::Base => unreachable!(),
        }
    }

    /// Reads the inflectional form of a verb token from its UD features,
    /// falling back to surface comparison when features are absent.
    pub fn verb_form_of(&self, token: &Token) -> VerbForm {
        let tense = token.feat("Tense");
        match token.feat("VerbForm") {
            Some("Ger") => return VerbForm::Gerund,
            Some("Part") => {
                return match tense {
                    Some("Pres") => VerbForm::Gerund,
                    Some("Past") => VerbForm::Participle,
                    _ if token.surface_lower().ends_with("ing") => VerbForm::Gerund,
                    _ => VerbForm::Participle,
                }
            }
            Some("Inf") => return VerbForm::Base,
            Some("Fin") => {
                return if tense == Some("Past") {
                    VerbForm::Past
                } else if token.feat("Person") == Some("3") && token.feat("Number") == Some("Sing") {
                    VerbForm::ThirdSingular
                } else {
                    VerbForm::Base
                }
            }
            _ => {}
        }
        if tense == Some("Past") {
            return VerbForm::Past;
        }
        let surface = token.surface_lower();
        let lemma = token.lemma_lower();
        if surface == lemma {
            VerbForm::Base
        } else if surface == self.inflect(&lemma, VerbForm::Gerund) || surface.ends_with("ing") {
            VerbForm::Gerund
        } else if surface == self.inflect(&lemma, VerbForm::ThirdSingular) {
            VerbForm::ThirdSingular
        } else if surface == self.inflect(&lemma, VerbForm::Past) {
            VerbForm::Past
        } else if surface == self.inflect(&lemma, VerbForm::Participle) {
            VerbForm::Participle
        } else {
            VerbForm::Base
        }
    }

    pub fn pluralize(&self, noun: &str) -> String {
        let noun = noun.to_lowercase();
        if let Some((_, plural)) = IRREGULAR_NOUNS.iter().find(|(s, _)| *s == noun) {
            return (*plural).to_owned();
        }
        if consonant_y(&noun) {
            format!("{}ies", &noun[..noun.len() - 1])
        } else if sibilant(&noun) {
            format!("{noun}es")
        } else {
            format!("{noun}s")
        }
    }

    pub fn adjective(&self, lemma: &str, degree: Degree) -> String {
        let lemma = lemma.to_lowercase();
        if degree == Degree::Positive {
            return lemma;
        }
        if let Some((_, cmp, sup)) = IRREGULAR_ADJECTIVES.iter().find(|(l, _, _)| *l == lemma) {
            return if degree == Degree::Comparative { cmp } else { sup }.to_string();
        }
        let (e_suffix, suffix) = match degree {
            Degree::Comparative => ("r", "er"),
            _ => ("st", "est"),
        };
        if lemma.ends_with('e') {
            format!("{lemma}{e_suffix}")
        } else if consonant_y(&lemma) {
            format!("{}i{suffix}", &lemma[..lemma.len() - 1])
        } else if doubles_final(&lemma) {
            let last = lemma.chars().last().unwrap();
            format!("{lemma}{last}{suffix}")
        } else {
            format!("{lemma}{suffix}")
        }
    }

    pub fn degree_of(token: &Token) -> Degree {
        match token.feat("Degree") {
            Some("Cmp") => Degree::Comparative,
            Some("Sup") => Degree::Superlative,
            _ => Degree::Positive,
        }
    }
}
