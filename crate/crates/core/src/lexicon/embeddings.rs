use std::collections::HashMap;
use std::path::Path;

use super::LexiconError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Nearest,
    Farthest,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Neighbor {
    pub word: String,
    pub cosine: f64,
}

/// Word vectors, L2-normalized on construction.
#[derive(Clone, Debug)]
pub struct EmbeddingIndex {
    dim: usize,
    words: Vec<String>,
    vectors: Vec<f64>,
    lookup: HashMap<String, usize>,
}

impl EmbeddingIndex {
    /// Parses the `word v1 v2 ... vd` text format. A leading `count dim`
    /// header line is skipped; duplicate words keep their first vector.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut dim: Option<usize> = None;
        let mut words = Vec::new();
        let mut vectors = Vec::new();
        let mut lookup = HashMap::new();

        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let mut parts = line.split_whitespace();
            let Some(word) = parts.next() else { continue };
            let rest: Vec<&str> = parts.collect();
            if i == 0 && rest.len() == 1 && word.parse::<usize>().is_ok() && rest[0].parse::<usize>().is_ok() {
                continue;
            }
            let values = rest
                .iter()
                .map(|v| {
                    v.parse::<f64>().map_err(|_| LexiconError::NonNumeric {
                        line: line_no,
                        value: (*v).to_owned(),
                    })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            match dim {
                None if values.is_empty() => {
                    return Err(LexiconError::DimMismatch {
                        line: line_no,
                        expected: 1,
                        found: 0,
                    })
                }
                None => dim = Some(values.len()),
                Some(d) if d != values.len() => {
                    return Err(LexiconError::DimMismatch {
                        line: line_no,
                        expected: d,
                        found: values.len(),
                    })
                }
                Some(_) => {}
            }
            let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(LexiconError::ZeroVector {
                    line: line_no,
                    word: word.to_owned(),
                });
            }
            if lookup.contains_key(word) {
                continue;
            }
            lookup.insert(word.to_owned(), words.len());
            words.push(word.to_owned());
            vectors.extend(values.iter().map(|v| v / norm));
        }
        Ok(EmbeddingIndex {
            dim: dim.unwrap_or(0),
            words,
            vectors,
            lookup,
        })
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.lookup.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.lookup.get(word).map(|&i| self.row(i))
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn cosine(&self, a: &str, b: &str) -> Option<f64> {
        Some(dot(self.vector(a)?, self.vector(b)?))
    }

    fn scored(&self, word: &str) -> Result<Vec<(usize, f64)>, LexiconError> {
        let q = self
            .vector(word)
            .ok_or_else(|| LexiconError::Oov(word.to_owned()))?;
        Ok((0..self.words.len())
            .filter(|&i| self.words[i] != word)
            .map(|i| (i, dot(q, self.row(i))))
            .collect())
    }

    /// Ranked neighbors of `word`.
    ///
    /// `Nearest` keeps words with cosine ≥ `threshold`, sorted by descending
    /// cosine. `Farthest` ranks the whole vocabulary by ascending cosine; the
    /// threshold does not apply to it. Ties keep vocabulary order.
    pub fn neighbors(
        &self,
        word: &str,
        k: usize,
        threshold: f64,
        direction: Direction,
    ) -> Result<Vec<Neighbor>, LexiconError> {
        let mut scored = self.scored(word)?;
        match direction {
            Direction::Nearest => {
                scored.retain(|&(_, c)| c >= threshold);
                scored.sort_by(|a, b| b.1.total_cmp(&a.1));
            }
            Direction::Farthest => scored.sort_by(|a, b| a.1.total_cmp(&b.1)),
        }
        Ok(scored
            .into_iter()
            .take(k)
            .map(|(i, c)| Neighbor {
                word: self.words[i].clone(),
                cosine: c,
            })
            .collect())
    }

    /// Unit direction averaged over `(a, b)` displacement vectors, with each
    /// pair sign-aligned to the first. `None` when no pair is in vocabulary.
    pub fn antonym_axis<'a>(&self, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Option<Vec<f64>> {
        let mut axis = vec![0.0; self.dim];
        let mut reference: Option<Vec<f64>> = None;
        for (a, b) in pairs {
            let (Some(va), Some(vb)) = (self.vector(a), self.vector(b)) else {
                continue;
            };
            let diff: Vec<f64> = vb.iter().zip(va).map(|(x, y)| x - y).collect();
            let sign = match &reference {
                None => {
                    reference = Some(diff.clone());
                    1.0
                }
                Some(r) if dot(r, &diff) < 0.0 => -1.0,
                Some(_) => 1.0,
            };
            for (acc, d) in axis.iter_mut().zip(&diff) {
                *acc += sign * d;
            }
        }
        reference?;
        let norm = dot(&axis, &axis).sqrt();
        if norm == 0.0 {
            return None;
        }
        Some(axis.into_iter().map(|v| v / norm).collect())
    }

    /// Antonym-style retrieval among topically related words.
    ///
    /// Candidates are words with cosine ≥ `threshold`. With an axis they are
    /// ranked by descending |projection of (candidate − query) onto the axis|;
    /// without one, by ascending cosine.
    pub fn opposite_neighbors(
        &self,
        word: &str,
        k: usize,
        threshold: f64,
        axis: Option<&[f64]>,
    ) -> Result<Vec<Neighbor>, LexiconError> {
        let q = self
            .vector(word)
            .ok_or_else(|| LexiconError::Oov(word.to_owned()))?
            .to_vec();
        let mut scored = self.scored(word)?;
        scored.retain(|&(_, c)| c >= threshold);
        match axis {
            Some(axis) => {
                let proj = |i: usize| -> f64 {
                    self.row(i)
                        .iter()
                        .zip(&q)
                        .zip(axis)
                        .map(|((c, q), a)| (c - q) * a)
                        .sum::<f64>()
                        .abs()
                };
                let mut with_proj: Vec<(usize, f64, f64)> =
                    scored.into_iter().map(|(i, c)| (i, c, proj(i))).collect();
                with_proj.sort_by(|a, b| b.2.total_cmp(&a.2));
                scored = with_proj.into_iter().map(|(i, c, _)| (i, c)).collect();
            }
            None => scored.sort_by(|a, b| a.1.total_cmp(&b.1)),
        }
        Ok(scored
            .into_iter()
            .take(k)
            .map(|(i, c)| Neighbor {
                word: self.words[i].clone(),
                cosine: c,
            })
            .collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
