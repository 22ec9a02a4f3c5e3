//! Integer ↔ number-word table: 0–20, the tens up to ninety, and a hundred.

const WORDS: &[(u32, &str)] = &[
    (0, "zero"),
    (1, "one"),
    (2, "two"),
    (3, "three"),
    (4, "four"),
    (5, "five"),
    (6, "six"),
    (7, "seven"),
    (8, "eight"),
    (9, "nine"),
    (10, "ten"),
    (11, "eleven"),
    (12, "twelve"),
    (13, "thirteen"),
    (14, "fourteen"),
    (15, "fifteen"),
    (16, "sixteen"),
    (17, "seventeen"),
    (18, "eighteen"),
    (19, "nineteen"),
    (20, "twenty"),
    (30, "thirty"),
    (40, "forty"),
    (50, "fifty"),
    (60, "sixty"),
    (70, "seventy"),
    (80, "eighty"),
    (90, "ninety"),
    (100, "hundred"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumberForm {
    Digits,
    Word,
}

pub fn number_word(n: u32) -> Option<&'static str> {
    WORDS.iter().find(|(v, _)| *v == n).map(|(_, w)| *w)
}

pub fn word_value(word: &str) -> Option<u32> {
    let lower = word.to_ascii_lowercase();
    WORDS.iter().find(|(_, w)| *w == lower).map(|(v, _)| *v)
}

/// Reads a numeral written either as ASCII digits or as a table word.
pub fn parse_number(s: &str) -> Option<(u32, NumberForm)> {
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        return s.parse().ok().map(|n| (n, NumberForm::Digits));
    }
    word_value(s).map(|n| (n, NumberForm::Word))
}

/// Renders `n` in `form`, falling back to digits outside the word table.
pub fn render_number(n: u32, form: NumberForm) -> String {
    match form {
        NumberForm::Word => number_word(n).map_or_else(|| n.to_string(), str::to_owned),
        NumberForm::Digits => n.to_string(),
    }
}

pub fn table() -> impl Iterator<Item = (u32, &'static str)> {
    WORDS.iter().copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn bijection() {
        let values: HashSet<u32> = table().map(|(v, _)| v).collect();
        let words: HashSet<&str> = table().map(|(_, w)| w).collect();
        assert_eq!(values.len(), WORDS.len());
        assert_eq!(words.len(), WORDS.len());
        for (v, w) in table() {
            assert_eq!(word_value(w), Some(v));
            assert_eq!(number_word(v), Some(w));
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_number("3"), Some((3, NumberForm::Digits)));
        assert_eq!(parse_number("Two"), Some((2, NumberForm::Word)));
        assert_eq!(parse_number("many"), None);
        assert_eq!(render_number(23, NumberForm::Word), "23");
        assert_eq!(render_number(7, NumberForm::Word), "seven");
    }
}
