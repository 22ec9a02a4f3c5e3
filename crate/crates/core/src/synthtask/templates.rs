//! Statement templates and their gold annotations.

use super::{Posture, COLORS, TYPES, TYPE_PLURALS};
use crate::corpus::{AnnotatedSentence, Token};
use crate::lexicon::number_word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatementKind {
    /// "There are <n> <color> <type>s"
    Count { kind: usize, color: usize, n: u32 },
    /// "The <type> is <color>"
    Property { kind: usize, color: usize },
    /// "The <a> is left of the <b>"
    Relation { a: usize, b: usize },
    /// "The <a> sits|stands left of the <b>"
    Action { a: usize, b: usize, posture: Posture },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub negated: bool,
}

struct Builder {
    tokens: Vec<Token>,
}

impl Builder {
    fn new() -> Self {
        Builder { tokens: Vec::new() }
    }

    fn push(&mut self, surface: &str, lemma: &str, upos: &str, feats: &str) -> usize {
        let index = self.tokens.len() + 1;
        self.tokens
            .push(Token::new(index, surface, lemma, upos, 0, "dep").with_feats(feats));
        index
    }

    fn attach(&mut self, dependent: usize, head: usize, deprel: &str) {
        let t = &mut self.tokens[dependent - 1];
        t.head = head;
        t.deprel = deprel.to_owned();
    }

    /// "the <type>"; returns the noun's index.
    fn definite(&mut self, kind: usize, capitalized: bool) -> usize {
        let det = self.push(if capitalized { "The" } else { "the" }, "the", "DET", "Definite=Def|PronType=Art");
        let noun = self.push(TYPES[kind], TYPES[kind], "NOUN", "Number=Sing");
        self.attach(det, noun, "det");
        noun
    }

    fn not(&mut self) -> usize {
        self.push("not", "not", "PART", "Polarity=Neg")
    }

    /// "[to the] left of the <b>", attached under `head` when given and
    /// heading the clause otherwise.
    fn left_of(&mut self, head: Option<usize>, b: usize, long: bool, upos: &str) -> usize {
        let pre = long.then(|| {
            (
                self.push("to", "to", "ADP", "_"),
                self.push("the", "the", "DET", "Definite=Def|PronType=Art"),
            )
        });
        let (upos, feats) = match (long, upos) {
            (true, _) => ("NOUN", "Number=Sing"),
            (false, "ADJ") => ("ADJ", "Degree=Pos"),
            (false, other) => (other, "_"),
        };
        let left = self.push("left", "left", upos, feats);
        let of = self.push("of", "of", "ADP", "_");
        let obj = self.definite(b, false);
        self.attach(of, obj, "case");
        if let Some((to, the)) = pre {
            self.attach(to, left, "case");
            self.attach(the, left, "det");
        }
        match head {
            Some(h) => {
                self.attach(obj, h, "obl");
                self.attach(left, h, if long { "obl" } else { "advmod" });
            }
            None => self.attach(obj, left, "obl"),
        }
        left
    }

    fn finish(mut self, id: &str) -> AnnotatedSentence {
        for t in self.tokens.iter_mut().filter(|t| t.head == 0) {
            t.deprel = "root".to_owned();
        }
        let mut s = AnnotatedSentence {
            id: id.to_owned(),
            raw_text: None,
            tokens: self.tokens,
            fragment: false,
        };
        s.raw_text = Some(s.text());
        s
    }
}

fn number_surface(n: u32) -> String {
    number_word(n).map_or_else(|| n.to_string(), str::to_owned)
}

impl Statement {
    /// Gold-annotated rendering. The paraphrase form rewords the template
    /// ("exactly", "colored", "to the left of") without changing its truth.
    pub fn render(&self, id: &str, paraphrase: bool) -> AnnotatedSentence {
        let mut b = Builder::new();
        match self.kind {
            StatementKind::Count { kind, color, n } => {
                let plural = n != 1;
                let there = b.push("There", "there", "PRON", "PronType=Dem");
                let verb = if plural {
                    b.push("are", "be", "VERB", "Mood=Ind|Tense=Pres|VerbForm=Fin")
                } else {
                    b.push("is", "be", "VERB", "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin")
                };
                b.attach(there, verb, "expl");
                if self.negated {
                    let not = b.not();
                    b.attach(not, verb, "advmod");
                }
                let exactly = paraphrase.then(|| b.push("exactly", "exactly", "ADV", "_"));
                let num = b.push(&number_surface(n), &number_surface(n), "NUM", "NumType=Card");
                if let Some(e) = exactly {
                    b.attach(e, num, "advmod");
                }
                let adj = b.push(COLORS[color], COLORS[color], "ADJ", "Degree=Pos");
                let noun = if plural {
                    b.push(TYPE_PLURALS[kind], TYPES[kind], "NOUN", "Number=Plur")
                } else {
                    b.push(TYPES[kind], TYPES[kind], "NOUN", "Number=Sing")
                };
                b.attach(num, noun, "nummod");
                b.attach(adj, noun, "amod");
                b.attach(noun, verb, "nsubj");
            }
            StatementKind::Property { kind, color } => {
                let noun = b.definite(kind, true);
                let cop = b.push("is", "be", "AUX", "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin");
                let not = self.negated.then(|| b.not());
                let colored = paraphrase.then(|| b.push("colored", "colored", "ADJ", "Degree=Pos"));
                let adj = b.push(COLORS[color], COLORS[color], "ADJ", "Degree=Pos");
                let head = colored.unwrap_or(adj);
                b.attach(noun, head, "nsubj");
                b.attach(cop, head, "cop");
                if let Some(n) = not {
                    b.attach(n, head, "advmod");
                }
                if let Some(c) = colored {
                    b.attach(adj, c, "xcomp");
                }
            }
            StatementKind::Relation { a, b: other } => {
                let noun = b.definite(a, true);
                let cop = b.push("is", "be", "AUX", "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin");
                let not = self.negated.then(|| b.not());
                let left = b.left_of(None, other, paraphrase, "ADJ");
                b.attach(noun, left, "nsubj");
                b.attach(cop, left, "cop");
                if let Some(n) = not {
                    b.attach(n, left, "advmod");
                }
            }
            StatementKind::Action { a, b: other, posture } => {
                let noun = b.definite(a, true);
                let verb = if self.negated {
                    let does = b.push("does", "do", "AUX", "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin");
                    let not = b.not();
                    let verb = b.push(posture.lemma(), posture.lemma(), "VERB", "VerbForm=Inf");
                    b.attach(does, verb, "aux");
                    b.attach(not, verb, "advmod");
                    verb
                } else {
                    b.push(
                        posture.third_singular(),
                        posture.lemma(),
                        "VERB",
                        "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
                    )
                };
                b.attach(noun, verb, "nsubj");
                b.left_of(Some(verb), other, paraphrase, "ADV");
            }
        }
        b.finish(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_conllu, write_conllu};

    fn all_statements() -> Vec<Statement> {
        let kinds = [
            StatementKind::Count { kind: 0, color: 0, n: 2 },
            StatementKind::Count { kind: 7, color: 5, n: 1 },
            StatementKind::Property { kind: 1, color: 2 },
            StatementKind::Relation { a: 0, b: 1 },
            StatementKind::Action { a: 0, b: 1, posture: Posture::Sits },
        ];
        kinds
            .iter()
            .flat_map(|&k| [false, true].map(|negated| Statement { kind: k, negated }))
            .collect()
    }

    #[test]
    fn surface_forms() {
        let text = |s: Statement, p: bool| s.render("x", p).text();
        let count = StatementKind::Count { kind: 0, color: 0, n: 2 };
        assert_eq!(text(Statement { kind: count, negated: false }, false), "There are two red cubes");
        assert_eq!(text(Statement { kind: count, negated: true }, false), "There are not two red cubes");
        assert_eq!(text(Statement { kind: count, negated: false }, true), "There are exactly two red cubes");
        let one = StatementKind::Count { kind: 6, color: 1, n: 1 };
        assert_eq!(text(Statement { kind: one, negated: false }, false), "There is one blue man");
        let rel = StatementKind::Relation { a: 0, b: 1 };
        assert_eq!(text(Statement { kind: rel, negated: false }, false), "The cube is left of the sphere");
        assert_eq!(text(Statement { kind: rel, negated: true }, true), "The cube is not to the left of the sphere");
        let act = StatementKind::Action { a: 2, b: 3, posture: Posture::Stands };
        assert_eq!(text(Statement { kind: act, negated: false }, false), "The cylinder stands left of the cone");
        assert_eq!(text(Statement { kind: act, negated: true }, false), "The cylinder does not stand left of the cone");
        let prop = StatementKind::Property { kind: 4, color: 3 };
        assert_eq!(text(Statement { kind: prop, negated: true }, true), "The pyramid is not colored yellow");
    }

    #[test]
    fn gold_annotations_roundtrip_through_the_reader() {
        let sentences: Vec<AnnotatedSentence> = all_statements()
            .iter()
            .enumerate()
            .flat_map(|(i, s)| [s.render(&format!("a{i}"), false), s.render(&format!("b{i}"), true)])
            .collect();
        let parsed = parse_conllu(&write_conllu(&sentences)).unwrap();
        assert_eq!(parsed, sentences);
        for s in &parsed {
            s.check_text().unwrap();
            assert_eq!(s.tokens.iter().filter(|t| t.head == 0).count(), 1, "{}", s.text());
        }
    }
}
