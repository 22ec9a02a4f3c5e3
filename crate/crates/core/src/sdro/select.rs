//! Loss tables and adversary selection.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::transforms::Category;

/// |C| × |G| losses of transformed samples; `None` where the transform did
/// not apply. Columns are in canonical category order.
#[derive(Clone, Debug, PartialEq)]
pub struct LossTable {
    pub rows: usize,
    pub columns: Vec<Category>,
    values: Vec<Option<f64>>,
}

impl LossTable {
    pub fn new(rows: usize, columns: Vec<Category>, values: Vec<Option<f64>>) -> Self {
        assert_eq!(values.len(), rows * columns.len(), "table shape");
        debug_assert!(values.iter().flatten().all(|v| *v >= 0.0));
        LossTable { rows, columns, values }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[Option<f64>] {
        let c = self.cols();
        &self.values[row * c..(row + 1) * c]
    }

    pub fn present(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Choice {
    pub row: usize,
    pub col: usize,
    pub loss: f64,
}

/// Chosen (row, column) entries in row-major order, with per-column counts.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AdvSelection {
    pub chosen: Vec<Choice>,
    pub per_group: Vec<usize>,
}

impl AdvSelection {
    fn from_choices(mut chosen: Vec<Choice>, cols: usize) -> Self {
        chosen.sort_by_key(|c| (c.row, c.col));
        let mut per_group = vec![0; cols];
        for c in &chosen {
            per_group[c.col] += 1;
        }
        AdvSelection { chosen, per_group }
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.chosen.iter().any(|c| c.row == row && c.col == col)
    }
}

/// Per row, the present entry with the largest loss; ties go to the
/// earlier column.
pub fn select_sample_wise(table: &LossTable) -> AdvSelection {
    let mut chosen = Vec::new();
    for r in 0..table.rows {
        let mut best: Option<Choice> = None;
        for (c, v) in table.row(r).iter().enumerate() {
            if let Some(loss) = *v {
                if best.is_none_or(|b| loss > b.loss) {
                    best = Some(Choice { row: r, col: c, loss });
                }
            }
        }
        chosen.extend(best);
    }
    AdvSelection::from_choices(chosen, table.cols())
}

/// `⌊rows / columns⌋`, zero for a table without columns.
pub fn group_k(rows: usize, columns: usize) -> usize {
    rows.checked_div(columns).unwrap_or(0)
}

/// Per column, the k highest-loss present entries with
/// k = ⌊rows / columns⌋; ties go to the earlier row. A row may be chosen
/// under several columns.
pub fn select_group_wise(table: &LossTable) -> AdvSelection {
    let k = group_k(table.rows, table.cols());
    let mut chosen = Vec::new();
    for c in 0..table.cols() {
        let mut col: Vec<Choice> = (0..table.rows)
            .filter_map(|r| table.get(r, c).map(|loss| Choice { row: r, col: c, loss }))
            .collect();
        col.sort_by(|a, b| b.loss.total_cmp(&a.loss).then(a.row.cmp(&b.row)));
        col.truncate(k);
        chosen.extend(col);
    }
    AdvSelection::from_choices(chosen, table.cols())
}

/// Per row, one present entry drawn uniformly at random.
pub fn select_random<R: Rng>(table: &LossTable, rng: &mut R) -> AdvSelection {
    let mut chosen = Vec::new();
    for r in 0..table.rows {
        let present: Vec<Choice> = table
            .row(r)
            .iter()
            .enumerate()
            .filter_map(|(c, v)| v.map(|loss| Choice { row: r, col: c, loss }))
            .collect();
        chosen.extend(present.choose(rng).copied());
    }
    AdvSelection::from_choices(chosen, table.cols())
}

/// Random split of `0..n` into a subset of size round(t·n) and the rest,
/// both returned in ascending order.
pub fn sample_subset<R: Rng>(n: usize, t: f64, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    let size = ((t * n as f64).round() as usize).min(n);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut subset = idx[..size].to_vec();
    let mut rest = idx[size..].to_vec();
    subset.sort_unstable();
    rest.sort_unstable();
    (subset, rest)
}

/// One slot of an augmented training set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Original(usize),
    /// Dataset index of the source sample and the column of its transform.
    Transformed { sample: usize, col: usize },
}

/// Builds D_aug with |D_aug| = n: all selected transforms, plus originals
/// drawn in dataset order from the rest and from subset members that
/// received no adversary.
pub fn assemble_augmented(n: usize, subset: &[usize], selection: &AdvSelection) -> Vec<Slot> {
    let mut touched = vec![false; n];
    for c in &selection.chosen {
        touched[subset[c.row]] = true;
    }
    let keep = n - selection.len();
    let mut out: Vec<Slot> = (0..n).filter(|&i| !touched[i]).take(keep).map(Slot::Original).collect();
    out.extend(selection.chosen.iter().map(|c| Slot::Transformed {
        sample: subset[c.row],
        col: c.col,
    }));
    debug_assert_eq!(out.len(), n);
    out
}
