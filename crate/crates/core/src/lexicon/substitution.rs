use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use indexmap::IndexMap;

use super::LexiconError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gender {
    F,
    M,
    N,
    PL,
}

impl Gender {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "F" => Some(Gender::F),
            "M" => Some(Gender::M),
            "N" => Some(Gender::N),
            "PL" => Some(Gender::PL),
            _ => None,
        }
    }

    /// The gender whose pronoun contradicts this one, if there is one.
    pub fn opposite(self) -> Option<Gender> {
        match self {
            Gender::F => Some(Gender::M),
            Gender::M => Some(Gender::F),
            Gender::N | Gender::PL => None,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gender::F => "F",
            Gender::M => "M",
            Gender::N => "N",
            Gender::PL => "PL",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Comparatives {
    pub synonyms: Vec<String>,
    pub antonyms: Vec<String>,
}

/// Curated substitution resources. Every list keeps file order as its rank.
#[derive(Clone, Debug)]
pub struct SubstitutionLexicon {
    pub synonyms: IndexMap<String, Vec<String>>,
    pub antonyms: IndexMap<String, Vec<String>>,
    pub comparatives: IndexMap<String, Comparatives>,
    pub human_nouns: IndexMap<String, Gender>,
    pub pronouns: HashMap<Gender, Vec<String>>,
    pub generic_descriptors: Vec<String>,
}

impl Default for SubstitutionLexicon {
    fn default() -> Self {
        SubstitutionLexicon {
            synonyms: IndexMap::new(),
            antonyms: IndexMap::new(),
            comparatives: IndexMap::new(),
            human_nouns: IndexMap::new(),
            pronouns: HashMap::new(),
            generic_descriptors: ["something", "someone", "somebody", "they"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

fn push_unique(list: &mut Vec<String>, word: &str) {
    if !list.iter().any(|w| w == word) {
        list.push(word.to_owned());
    }
}

impl SubstitutionLexicon {
    /// Parses `word<TAB>rel<TAB>target` lines with
    /// rel ∈ {syn, ant, comp_syn, comp_ant, gender, pronoun}.
    ///
    /// For `gender` the target is a tag (F, M, N, PL); for `pronoun` the
    /// word is the tag and the target the pronoun.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = SubstitutionLexicon::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() != 3 || cols.iter().any(|c| c.is_empty()) {
                return Err(LexiconError::Malformed {
                    line: line_no,
                    message: format!("expected 3 tab-separated columns, found {}", cols.len()),
                });
            }
            let (word, rel, target) = (cols[0], cols[1], cols[2]);
            match rel {
                "gender" => {
                    let g = Gender::parse(target).ok_or_else(|| LexiconError::Malformed {
                        line: line_no,
                        message: format!("unknown gender tag `{target}`"),
                    })?;
                    lex.human_nouns.entry(word.to_lowercase()).or_insert(g);
                    continue;
                }
                "pronoun" => {
                    let g = Gender::parse(word).ok_or_else(|| LexiconError::Malformed {
                        line: line_no,
                        message: format!("unknown gender tag `{word}`"),
                    })?;
                    push_unique(lex.pronouns.entry(g).or_default(), &target.to_lowercase());
                    continue;
                }
                _ => {}
            }
            let (word, target) = (word.to_lowercase(), target.to_lowercase());
            if word == target {
                return Err(LexiconError::SelfMapping { line: line_no, word });
            }
            match rel {
                "syn" => push_unique(lex.synonyms.entry(word).or_default(), &target),
                "ant" => push_unique(lex.antonyms.entry(word).or_default(), &target),
                "comp_syn" => push_unique(&mut lex.comparatives.entry(word).or_default().synonyms, &target),
                "comp_ant" => push_unique(&mut lex.comparatives.entry(word).or_default().antonyms, &target),
                other => {
                    return Err(LexiconError::Malformed {
                        line: line_no,
                        message: format!("unknown relation `{other}`"),
                    })
                }
            }
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn synonyms_of(&self, word: &str) -> &[String] {
        self.synonyms.get(word).map_or(&[], Vec::as_slice)
    }

    pub fn antonyms_of(&self, word: &str) -> &[String] {
        self.antonyms.get(word).map_or(&[], Vec::as_slice)
    }

    pub fn gender_of(&self, noun: &str) -> Option<Gender> {
        self.human_nouns.get(noun).copied()
    }

    pub fn pronoun_for(&self, gender: Gender) -> Option<&str> {
        self.pronouns.get(&gender).and_then(|v| v.first()).map(String::as_str)
    }

    /// All (word, antonym) pairs, for deriving an antonym direction.
    pub fn antonym_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.antonyms
            .iter()
            .flat_map(|(w, ants)| ants.iter().map(move |a| (w.as_str(), a.as_str())))
    }
}
