//! Plain-text checkpoints.
//!
//! ```text
//! sdro-model 1
//! vocab <n>
//! <one word per line>
//! dims <embed> <hidden> <context>
//! <name> <rows> <cols>
//! <rows lines of cols values>
//! ...
//! ```
//!
//! Values use Rust's shortest round-trip float formatting, so a
//! save/load cycle is bit-exact.

use std::path::Path;

use thiserror::Error;

use super::{Dims, ToyGroundedModel, Vocab};

const MAGIC: &str = "sdro-model";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unsupported checkpoint version {0}")]
    Version(u32),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn write_block(out: &mut String, name: &str, rows: usize, cols: usize, values: &[f64]) {
    out.push_str(&format!("{name} {rows} {cols}\n"));
    for r in 0..rows {
        let line: Vec<String> = values[r * cols..(r + 1) * cols].iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str, CheckpointError> {
        let (i, l) = self.inner.next().ok_or(CheckpointError::Malformed {
            line: self.line + 1,
            message: "unexpected end of file".into(),
        })?;
        self.line = i + 1;
        Ok(l)
    }

    fn err(&self, message: impl Into<String>) -> CheckpointError {
        CheckpointError::Malformed {
            line: self.line,
            message: message.into(),
        }
    }

    fn header(&mut self, name: &str) -> Result<Vec<usize>, CheckpointError> {
        let l = self.next()?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(name) {
            return Err(self.err(format!("expected `{name}`")));
        }
        parts
            .map(|p| p.parse::<usize>().map_err(|_| self.err(format!("bad size `{p}`"))))
            .collect()
    }

    fn block(&mut self, name: &str, rows: usize, cols: usize) -> Result<Vec<f64>, CheckpointError> {
        let shape = self.header(name)?;
        if shape != [rows, cols] {
            return Err(self.err(format!("`{name}` has shape {shape:?}, expected [{rows}, {cols}]")));
        }
        let mut out = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let l = self.next()?;
            let before = out.len();
            for v in l.split_whitespace() {
                out.push(v.parse::<f64>().map_err(|_| self.err(format!("bad value `{v}`")))?);
            }
            if out.len() - before != cols {
                return Err(self.err(format!("expected {cols} values")));
            }
        }
        Ok(out)
    }
}

impl ToyGroundedModel {
    pub fn to_text(&self) -> String {
        let mut out = format!("{MAGIC} {VERSION}\nvocab {}\n", self.vocab.len());
        for w in self.vocab.words() {
            out.push_str(w);
            out.push('\n');
        }
        let d = self.dims;
        out.push_str(&format!("dims {} {} {}\n", d.embed, d.hidden, d.context));
        write_block(&mut out, "embedding", self.vocab.len(), d.embed, &self.embedding);
        write_block(&mut out, "w1", d.hidden, d.input(), &self.w1);
        write_block(&mut out, "b1", 1, d.hidden, &self.b1);
        write_block(&mut out, "w2", 1, d.hidden, &self.w2);
        write_block(&mut out, "b2", 1, 1, &[self.b2]);
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CheckpointError> {
        let mut lines = Lines {
            inner: text.lines().enumerate(),
            line: 0,
        };
        let first = lines.next()?;
        let version = first
            .strip_prefix(MAGIC)
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| lines.err("not a model checkpoint"))?;
        if version != VERSION {
            return Err(CheckpointError::Version(version));
        }
        let n = match lines.header("vocab")?.as_slice() {
            [n] => *n,
            _ => return Err(lines.err("expected `vocab <n>`")),
        };
        let mut words = Vec::with_capacity(n);
        for _ in 0..n {
            words.push(lines.next()?.to_owned());
        }
        if words.first().map(String::as_str) != Some(super::UNK) {
            return Err(lines.err("vocabulary must start with the unknown-word slot"));
        }
        let vocab = Vocab::from_words(words.into_iter().skip(1));
        if vocab.len() != n {
            return Err(lines.err("duplicate vocabulary entries"));
        }
        let dims = match lines.header("dims")?.as_slice() {
            [e, h, c] => Dims {
                embed: *e,
                hidden: *h,
                context: *c,
            },
            _ => return Err(lines.err("expected `dims <embed> <hidden> <context>`")),
        };
        let embedding = lines.block("embedding", n, dims.embed)?;
        let w1 = lines.block("w1", dims.hidden, dims.input())?;
        let b1 = lines.block("b1", 1, dims.hidden)?;
        let w2 = lines.block("w2", 1, dims.hidden)?;
        let b2 = lines.block("b2", 1, 1)?[0];
        Ok(ToyGroundedModel {
            vocab,
            dims,
            embedding,
            w1,
            b1,
            w2,
            b2,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        std::fs::write(path, self.to_text()).map_err(|source| CheckpointError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let text = std::fs::read_to_string(path).map_err(|source| CheckpointError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_exact() {
        let vocab = Vocab::build([vec!["a", "b", "c"]]);
        let m = ToyGroundedModel::init(vocab, Dims { embed: 3, hidden: 4, context: 2 }, 8);
        let back = ToyGroundedModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ToyGroundedModel::from_text("hello").is_err());
        assert!(matches!(
            ToyGroundedModel::from_text("sdro-model 9\n"),
            Err(CheckpointError::Version(9))
        ));
        let vocab = Vocab::build([vec!["a"]]);
        let m = ToyGroundedModel::init(vocab, Dims { embed: 2, hidden: 2, context: 1 }, 1);
        let text = m.to_text().replace("w1 2 3", "w1 2 4");
        assert!(ToyGroundedModel::from_text(&text).is_err());
    }
}
