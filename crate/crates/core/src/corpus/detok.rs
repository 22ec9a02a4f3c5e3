//! Detokenization with a fixed attachment table.
//!
//! Tokens are joined by single spaces except:
//!
//! | token                                   | rule                    |
//! |-----------------------------------------|-------------------------|
//! | `. , ! ? ; : ... %`                     | no space before         |
//! | `'s n't 're 've 'll 'd 'm`              | no space before         |
//! | `) ] }` and closing quotes `'' ” ’`     | no space before         |
//! | `( [ { $` and opening quotes `` `` “ ‘`` | no space after          |
//! | `"`                                     | alternates open / close |
//!
//! Contractions are never re-split and casing is taken verbatim from the
//! token surfaces.

const ATTACH_LEFT: &[&str] = &[
    ".", ",", "!", "?", ";", ":", "...", "%", "'s", "n't", "'re", "'ve", "'ll", "'d", "'m", ")",
    "]", "}", "''", "\u{201d}", "\u{2019}",
];

const ATTACH_RIGHT: &[&str] = &["(", "[", "{", "$", "``", "\u{201c}", "\u{2018}"];

pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    let mut glue_next = true;
    let mut open_double_quote = false;

    for token in tokens {
        let token = token.as_ref();
        let (attach_left, attach_right) = if token == "\"" {
            open_double_quote = !open_double_quote;
            // After toggling: true means this quote opened a span.
            (!open_double_quote, open_double_quote)
        } else {
            (
                ATTACH_LEFT.iter().any(|p| p.eq_ignore_ascii_case(token)),
                ATTACH_RIGHT.contains(&token),
            )
        };
        if !glue_next && !attach_left {
            out.push(' ');
        }
        out.push_str(token);
        glue_next = attach_right;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::detokenize;

    #[test]
    fn plain_join() {
        assert_eq!(
            detokenize(&["The", "closet", "doors", "are", "not", "mirrored"]),
            "The closet doors are not mirrored"
        );
    }

    #[test]
    fn punctuation_attaches_left() {
        assert_eq!(detokenize(&["children", ",", "standing"]), "children, standing");
        assert_eq!(detokenize(&["It", "'s", "done", "."]), "It's done.");
        assert_eq!(detokenize(&["do", "n't"]), "don't");
    }

    #[test]
    fn brackets_and_quotes() {
        assert_eq!(detokenize(&["a", "(", "b", ")", "c"]), "a (b) c");
        assert_eq!(detokenize(&["he", "said", "\"", "hi", "\"", "."]), "he said \"hi\".");
    }

    #[test]
    fn empty() {
        let none: [&str; 0] = [];
        assert_eq!(detokenize(&none), "");
    }

    #[test]
    fn pure() {
        let toks = ["A", "b", ",", "c"];
        assert_eq!(detokenize(&toks), detokenize(&toks));
    }
}
