//! Truth of a statement against a scene, by direct evaluation.
//!
//! Grammar (case-insensitive, optional final period):
//!
//! ```text
//! there (is|are) [not] QUANT COLOR TYPE
//!     QUANT := [exactly] NUM | (more|less|fewer) than NUM
//! the TYPE is [not] [colored] COLOR
//! the TYPE is [not] [to the] (left|right) of the TYPE
//! the TYPE (sits|stands) [to the] (left|right) of the TYPE
//! the TYPE does not (sit|stand) [to the] (left|right) of the TYPE
//! ```
//!
//! Definite descriptions require exactly one object of the type; when that
//! fails the statement is false, negated or not.

use thiserror::Error;

use super::{color_index, type_index, Posture, Scene};
use crate::corpus::Label;
use crate::lexicon::parse_number;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("statement `{0}` is outside the template grammar")]
pub struct Unevaluable(pub String);

enum Quant {
    Exactly(u32),
    More(u32),
    Less(u32),
}

struct Cursor<'a> {
    words: &'a [String],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&str> {
        self.words.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> Option<&'a str> {
        let w = self.words.get(self.pos)?;
        self.pos += 1;
        Some(w)
    }

    fn eat(&mut self, word: &str) -> bool {
        if self.peek() == Some(word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, word: &str) -> Option<()> {
        self.eat(word).then_some(())
    }

    fn done(&self) -> bool {
        self.pos == self.words.len()
    }
}

fn number(c: &mut Cursor) -> Option<u32> {
    parse_number(c.next()?).map(|(n, _)| n)
}

fn quant(c: &mut Cursor) -> Option<Quant> {
    match c.peek()? {
        "more" => {
            c.next();
            c.expect("than")?;
            Some(Quant::More(number(c)?))
        }
        "less" | "fewer" => {
            c.next();
            c.expect("than")?;
            Some(Quant::Less(number(c)?))
        }
        _ => {
            c.eat("exactly");
            Some(Quant::Exactly(number(c)?))
        }
    }
}

fn definite(c: &mut Cursor) -> Option<usize> {
    c.expect("the")?;
    type_index(c.next()?)
}

/// "[to the] (left|right) of the TYPE" → (is_left, type)
fn direction(c: &mut Cursor) -> Option<(bool, usize)> {
    if c.eat("to") {
        c.expect("the")?;
    }
    let left = match c.next()? {
        "left" => true,
        "right" => false,
        _ => return None,
    };
    c.expect("of")?;
    Some((left, definite(c)?))
}

fn left_of(scene: &Scene, a: usize, b: usize, left: bool) -> Option<bool> {
    let (oa, ob) = (scene.unique(a)?, scene.unique(b)?);
    Some(if left { oa.x < ob.x } else { oa.x > ob.x })
}

fn evaluate(scene: &Scene, c: &mut Cursor) -> Option<bool> {
    if c.eat("there") {
        if !(c.eat("is") || c.eat("are")) {
            return None;
        }
        let negated = c.eat("not");
        let q = quant(c)?;
        let color = color_index(c.next()?)?;
        let kind = type_index(c.next()?)?;
        if !c.done() {
            return None;
        }
        let n = scene.count(kind, color) as u32;
        let holds = match q {
            Quant::Exactly(m) => n == m,
            Quant::More(m) => n > m,
            Quant::Less(m) => n < m,
        };
        return Some(holds != negated);
    }

    let a = definite(c)?;
    let truth = match c.next()? {
        "is" => {
            let negated = c.eat("not");
            let holds = match c.peek()? {
                "to" | "left" | "right" => {
                    let (left, b) = direction(c)?;
                    left_of(scene, a, b, left)
                }
                _ => {
                    c.eat("colored");
                    let color = color_index(c.next()?)?;
                    scene.unique(a).map(|o| o.color == color)
                }
            };
            holds.map(|h| h != negated)
        }
        verb @ ("sits" | "stands" | "does") => {
            let (negated, posture) = if verb == "does" {
                c.expect("not")?;
                let p = match c.next()? {
                    "sit" => Posture::Sits,
                    "stand" => Posture::Stands,
                    _ => return None,
                };
                (true, p)
            } else {
                (false, if verb == "sits" { Posture::Sits } else { Posture::Stands })
            };
            let (left, b) = direction(c)?;
            left_of(scene, a, b, left).map(|h| (h && Posture::of(a) == posture) != negated)
        }
        _ => return None,
    };
    if !c.done() {
        return None;
    }
    Some(truth.unwrap_or(false))
}

/// Truth of `tokens` in `scene`, or [`Unevaluable`] for anything the
/// grammar does not cover.
pub fn oracle_label<S: AsRef<str>>(scene: &Scene, tokens: &[S]) -> Result<Label, Unevaluable> {
    let mut words: Vec<String> = tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
    if words.last().is_some_and(|w| w == ".") {
        words.pop();
    }
    let mut c = Cursor { words: &words, pos: 0 };
    evaluate(scene, &mut c)
        .map(Label::from_bool)
        .ok_or_else(|| Unevaluable(words.join(" ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthtask::SceneObject;

    fn scene() -> Scene {
        Scene {
            id: "s".into(),
            objects: vec![
                SceneObject { kind: 0, color: 0, x: 1 },
                SceneObject { kind: 0, color: 0, x: 4 },
                SceneObject { kind: 1, color: 1, x: 6 },
                SceneObject { kind: 2, color: 2, x: 0 },
            ],
        }
    }

    fn eval(s: &str) -> Result<Label, Unevaluable> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        oracle_label(&scene(), &toks)
    }

    #[test]
    fn counts() {
        assert_eq!(eval("There are two red cubes"), Ok(Label::True));
        assert_eq!(eval("There are three red cubes"), Ok(Label::False));
        assert_eq!(eval("There are not two red cubes"), Ok(Label::False));
        assert_eq!(eval("There are more than one red cubes ."), Ok(Label::True));
        assert_eq!(eval("There are less than two red cubes"), Ok(Label::False));
        assert_eq!(eval("There are exactly 2 red cubes"), Ok(Label::True));
        assert_eq!(eval("There is one grey man"), Ok(Label::False));
    }

    #[test]
    fn definite_descriptions() {
        assert_eq!(eval("The sphere is blue"), Ok(Label::True));
        assert_eq!(eval("The sphere is not blue"), Ok(Label::False));
        assert_eq!(eval("The sphere is colored green"), Ok(Label::False));
        // two cubes: the description fails either way
        assert_eq!(eval("The cube is red"), Ok(Label::False));
        assert_eq!(eval("The cube is not red"), Ok(Label::False));
        assert_eq!(eval("The cylinder is left of the sphere"), Ok(Label::True));
        assert_eq!(eval("The sphere is left of the cylinder"), Ok(Label::False));
        assert_eq!(eval("The sphere is to the right of the cylinder"), Ok(Label::True));
        assert_eq!(eval("The cylinder is not left of the sphere"), Ok(Label::False));
    }

    #[test]
    fn actions() {
        assert_eq!(eval("The cylinder stands left of the sphere"), Ok(Label::True));
        assert_eq!(eval("The cylinder sits left of the sphere"), Ok(Label::False));
        assert_eq!(eval("The cylinder does not stand left of the sphere"), Ok(Label::False));
        assert_eq!(eval("The sphere sits right of the cylinder"), Ok(Label::True));
    }

    #[test]
    fn outside_grammar() {
        assert!(eval("The block is red").is_err());
        assert!(eval("He is left of the sphere").is_err());
        assert!(eval("There are two red cubes today").is_err());
    }
}
