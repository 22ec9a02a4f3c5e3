use indexmap::IndexSet;

pub const UNK: &str = "<unk>";

/// Lowercased token vocabulary; index 0 is the unknown-word slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocab {
    words: IndexSet<String>,
}

impl Default for Vocab {
    fn default() -> Self {
        let mut words = IndexSet::new();
        words.insert(UNK.to_owned());
        Vocab { words }
    }
}

impl Vocab {
    pub fn build<I, T, S>(sentences: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut v = Vocab::default();
        for sentence in sentences {
            for w in sentence {
                v.words.insert(w.as_ref().to_lowercase());
            }
        }
        v
    }

    pub fn from_words(words: impl IntoIterator<Item = String>) -> Self {
        let mut v = Vocab::default();
        for w in words {
            v.words.insert(w);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, word: &str) -> usize {
        self.words.get_index_of(word.to_lowercase().as_str()).unwrap_or(0)
    }

    pub fn word(&self, index: usize) -> Option<&str> {
        self.words.get_index(index).map(String::as_str)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<usize> {
        tokens.iter().map(|t| self.index(t.as_ref())).collect()
    }
}
