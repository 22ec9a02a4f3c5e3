use serde::{Deserialize, Serialize};

/// Replace origin tokens `[start, end)` (0-based) with `replacement`.
/// `start == end` is an insertion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub start: usize,
    pub end: usize,
    pub replacement: Vec<String>,
}

impl Edit {
    pub fn replace(start: usize, end: usize, words: Vec<String>) -> Self {
        Edit {
            start,
            end,
            replacement: words,
        }
    }

    pub fn insert(at: usize, words: Vec<String>) -> Self {
        Edit::replace(at, at, words)
    }
}

/// Applies non-overlapping edits sorted by position.
pub fn apply_edits<S: AsRef<str>>(origin: &[S], edits: &[Edit]) -> Vec<String> {
    let mut out = Vec::with_capacity(origin.len() + 4);
    let mut cursor = 0;
    for e in edits {
        debug_assert!(e.start >= cursor && e.end >= e.start && e.end <= origin.len());
        out.extend(origin[cursor..e.start].iter().map(|s| s.as_ref().to_owned()));
        out.extend(e.replacement.iter().cloned());
        cursor = e.end;
    }
    out.extend(origin[cursor..].iter().map(|s| s.as_ref().to_owned()));
    out
}

/// Smallest single edit turning `origin` into `target` (common prefix and
/// suffix kept). Identical inputs give a full-span edit so that every
/// output records at least one edit.
pub fn diff_edit<S: AsRef<str>, T: AsRef<str>>(origin: &[S], target: &[T]) -> Edit {
    let same = |a: &S, b: &T| a.as_ref() == b.as_ref();
    if origin.len() == target.len() && origin.iter().zip(target).all(|(a, b)| same(a, b)) {
        return Edit::replace(0, origin.len(), target.iter().map(|t| t.as_ref().to_owned()).collect());
    }
    let prefix = origin.iter().zip(target).take_while(|(a, b)| same(a, b)).count();
    let max_suffix = origin.len().min(target.len()) - prefix;
    let suffix = origin
        .iter()
        .rev()
        .zip(target.iter().rev())
        .take(max_suffix)
        .take_while(|(a, b)| same(a, b))
        .count();
    Edit::replace(
        prefix,
        origin.len() - suffix,
        target[prefix..target.len() - suffix]
            .iter()
            .map(|t| t.as_ref().to_owned())
            .collect(),
    )
}
