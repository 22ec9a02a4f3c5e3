//! Accuracy on clean and transformed test sets, test-time ensembling,
//! calibration and the text-only bias probe.

mod calibration;

pub use calibration::{bin_index, confidence, ece, reliability, Bin, CalibrationReport, DEFAULT_BINS};

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Dataset, Label};
use crate::model::ToyGroundedModel;
use crate::transforms::{Category, Engine, Polarity, Source, TransformedSample, ALL_CATEGORIES};

pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("no predictions to evaluate")]
    NoPredictions,
    #[error("bin count must be positive")]
    Bins,
    #[error("alpha must lie in [0, 1], got {0}")]
    Alpha(f64),
    #[error("transformed sample refers to unknown origin `{0}`")]
    UnknownOrigin(String),
}

/// Prediction for a probability of True.
pub fn predict(p: f64) -> Label {
    Label::from_bool(p > 0.5)
}

fn contexts(data: &Dataset) -> HashMap<&str, &[f64]> {
    data.samples()
        .iter()
        .map(|s| (s.id.as_str(), data.context_of(s).as_slice()))
        .collect()
}

/// `(probability of True, gold label)` for every sample of `data`.
pub fn clean_predictions(model: &ToyGroundedModel, data: &Dataset) -> Vec<(f64, Label)> {
    data.samples()
        .iter()
        .map(|s| (model.forward(&data.sentence_of(s).surfaces(), data.context_of(s).as_slice()), s.label))
        .collect()
}

fn accuracy(preds: &[(f64, Label)]) -> Option<f64> {
    if preds.is_empty() {
        return None;
    }
    let correct = preds.iter().filter(|(p, y)| predict(*p) == *y).count();
    Some(correct as f64 / preds.len() as f64)
}

/// Fraction of `data` classified correctly; `None` when empty.
pub fn clean_accuracy(model: &ToyGroundedModel, data: &Dataset) -> Option<f64> {
    accuracy(&clean_predictions(model, data))
}

/// Predictions for transformed samples, scored against their transformed
/// labels. `context` overrides the origin's context (used by the bias probe).
fn transformed_predictions(
    model: &ToyGroundedModel,
    data: &Dataset,
    items: &[TransformedSample],
    context: Option<&[f64]>,
) -> Result<Vec<(Category, f64, Label)>, EvalError> {
    let ctx = contexts(data);
    items
        .iter()
        .map(|t| {
            let c = match context {
                Some(c) => c,
                None => ctx
                    .get(t.origin_id.as_str())
                    .copied()
                    .ok_or_else(|| EvalError::UnknownOrigin(t.origin_id.clone()))?,
            };
            Ok((t.category(), model.forward(&t.tokens, c), t.label))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryCell {
    pub category: String,
    pub polarity: String,
    pub n: usize,
    pub correct: usize,
    /// `None` when the category has no samples.
    pub accuracy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub clean: Option<f64>,
    pub clean_n: usize,
    /// One cell per category in canonical order.
    pub categories: Vec<CategoryCell>,
    pub sp_avg: Option<f64>,
    pub si_avg: Option<f64>,
    /// Mean of the SP and SI averages.
    pub sisp_avg: Option<f64>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

impl MetricsReport {
    fn from_counts(clean: Option<f64>, clean_n: usize, counts: &[(usize, usize)]) -> Self {
        let categories: Vec<CategoryCell> = ALL_CATEGORIES
            .iter()
            .map(|&c| {
                let (n, correct) = counts[c.index()];
                CategoryCell {
                    category: c.name().to_owned(),
                    polarity: c.polarity().as_str().to_owned(),
                    n,
                    correct,
                    accuracy: (n > 0).then(|| correct as f64 / n as f64),
                }
            })
            .collect();
        let avg = |pol: Polarity| {
            mean(
                ALL_CATEGORIES
                    .iter()
                    .filter(|c| c.polarity() == pol)
                    .filter_map(|c| categories[c.index()].accuracy),
            )
        };
        let sp_avg = avg(Polarity::SP);
        let si_avg = avg(Polarity::SI);
        MetricsReport {
            clean,
            clean_n,
            sisp_avg: mean(sp_avg.into_iter().chain(si_avg)),
            categories,
            sp_avg,
            si_avg,
        }
    }

    pub fn cell(&self, category: Category) -> &CategoryCell {
        &self.categories[category.index()]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("category,n,accuracy\n");
        for c in &self.categories {
            let acc = c.accuracy.map(|a| a.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", c.category, c.n, acc));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Clean accuracy on `data` and per-category accuracy on `items`, the
/// transforms of `data`'s samples.
pub fn evaluate(
    model: &ToyGroundedModel,
    data: &Dataset,
    items: &[TransformedSample],
) -> Result<MetricsReport, EvalError> {
    let clean = clean_predictions(model, data);
    sisp_report(accuracy(&clean), clean.len(), &transformed_predictions(model, data, items, None)?)
}

fn sisp_report(clean: Option<f64>, clean_n: usize, preds: &[(Category, f64, Label)]) -> Result<MetricsReport, EvalError> {
    let mut counts = vec![(0usize, 0usize); ALL_CATEGORIES.len()];
    for &(c, p, y) in preds {
        let cell = &mut counts[c.index()];
        cell.0 += 1;
        if predict(p) == y {
            cell.1 += 1;
        }
    }
    Ok(MetricsReport::from_counts(clean, clean_n, &counts))
}

/// Per-category accuracy on transformed samples only.
pub fn sisp_accuracy(
    model: &ToyGroundedModel,
    data: &Dataset,
    items: &[TransformedSample],
) -> Result<MetricsReport, EvalError> {
    sisp_report(None, 0, &transformed_predictions(model, data, items, None)?)
}

/// SISP accuracy with every context replaced by zeros, which measures how
/// much the model answers from the text alone.
pub fn text_only_bias(
    model: &ToyGroundedModel,
    data: &Dataset,
    items: &[TransformedSample],
) -> Result<MetricsReport, EvalError> {
    if items.is_empty() {
        return Err(EvalError::NoPredictions);
    }
    let zeros = vec![0.0; model.dims.context];
    sisp_report(None, 0, &transformed_predictions(model, data, items, Some(&zeros))?)
}

/// Ensemble of the original prediction with its transforms:
/// `α·f(x) + (1−α)/2·mean(SP preds) + (1−α)/2·mean(1 − SI preds)`. A
/// polarity without transforms hands its weight to the other; with none at
/// all the original prediction is returned unchanged.
pub fn ensemble_predict(fx: f64, sp: &[f64], si: &[f64], alpha: f64) -> f64 {
    let sp_mean = mean(sp.iter().copied());
    let si_mean = mean(si.iter().map(|p| 1.0 - p));
    let rest = match (sp_mean, si_mean) {
        (Some(a), Some(b)) => (a + b) / 2.0,
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return fx,
    };
    alpha * fx + (1.0 - alpha) * rest
}

/// Ensembled `(probability of True, gold label)` for every sample of `data`,
/// using all applicable transforms of `categories`.
pub fn ensemble_predictions(
    model: &ToyGroundedModel,
    engine: &Engine,
    data: &Dataset,
    categories: &[Category],
    alpha: f64,
    seed: u64,
) -> Result<Vec<(f64, Label)>, EvalError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(EvalError::Alpha(alpha));
    }
    Ok(data
        .samples()
        .iter()
        .map(|s| {
            let sentence = data.sentence_of(s);
            let ctx = data.context_of(s).as_slice();
            let fx = model.forward(&sentence.surfaces(), ctx);
            let mut sp = Vec::new();
            let mut si = Vec::new();
            for t in engine.apply_all(&Source::new(&s.id, sentence, s.label), categories, seed) {
                let p = model.forward(&t.tokens, ctx);
                match t.tag.polarity {
                    Polarity::SP => sp.push(p),
                    Polarity::SI => si.push(p),
                }
            }
            (ensemble_predict(fx, &sp, &si, alpha), s.label)
        })
        .collect())
}

pub fn ensemble_accuracy(
    model: &ToyGroundedModel,
    engine: &Engine,
    data: &Dataset,
    categories: &[Category],
    alpha: f64,
    seed: u64,
) -> Result<Option<f64>, EvalError> {
    Ok(accuracy(&ensemble_predictions(model, engine, data, categories, alpha, seed)?))
}

/// `(probability of True, correct)` pairs ready for [`reliability`].
pub fn correctness(preds: &[(f64, Label)]) -> Vec<(f64, bool)> {
    preds.iter().map(|&(p, y)| (p, predict(p) == y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ensemble_formula() {
        assert_eq!(ensemble_predict(0.8, &[], &[], 0.5), 0.8);
        assert_eq!(ensemble_predict(0.8, &[0.8, 0.8], &[0.2], 0.5), 0.8);
        let e = ensemble_predict(0.6, &[0.7, 0.5], &[0.3], 0.5);
        assert!((e - 0.625).abs() < 1e-12);
        let sp_only = ensemble_predict(0.6, &[0.2], &[], 0.5);
        assert!((sp_only - 0.4).abs() < 1e-12);
        assert_eq!(ensemble_predict(0.3, &[0.9], &[0.9], 1.0), 0.3);
    }

    #[test]
    fn report_averages() {
        let preds = vec![
            (Category::Negation, 0.9, Label::True),
            (Category::Negation, 0.9, Label::False),
            (Category::NounSynonym, 0.1, Label::False),
        ];
        let r = sisp_report(None, 0, &preds).unwrap();
        assert_eq!(r.cell(Category::Negation).accuracy, Some(0.5));
        assert_eq!(r.cell(Category::NounAntonym).accuracy, None);
        assert_eq!(r.si_avg, Some(0.5));
        assert_eq!(r.sp_avg, Some(1.0));
        assert_eq!(r.sisp_avg, Some(0.75));
        assert!(r.to_csv().contains("noun-antonym,0,\n"));
    }

    fn unit() -> impl proptest::strategy::Strategy<Value = f64> {
        0.0f64..=1.0
    }

    proptest::proptest! {
        #[test]
        fn ensemble_stays_in_range_and_is_monotone(
            fx in unit(),
            bump in 0.0f64..0.5,
            sp in proptest::collection::vec(unit(), 0..5),
            si in proptest::collection::vec(unit(), 0..5),
            alpha in unit(),
        ) {
            let e = ensemble_predict(fx, &sp, &si, alpha);
            proptest::prop_assert!((0.0..=1.0).contains(&e));
            let higher = ensemble_predict((fx + bump).min(1.0), &sp, &si, alpha);
            proptest::prop_assert!(higher >= e - 1e-15);
            let mut sp_rev = sp.clone();
            sp_rev.reverse();
            let mut si_rev = si.clone();
            si_rev.reverse();
            let r = ensemble_predict(fx, &sp_rev, &si_rev, alpha);
            proptest::prop_assert!((r - e).abs() < 1e-12);
        }
    }

    #[test]
    fn bias_probe_matches_sisp_for_context_blind_model() {
        use crate::lexicon::Lexicon;
        use crate::model::{Block, Dims, Vocab};
        use crate::synthtask::{generate_dataset, SynthConfig};
        use crate::transforms::transform_dataset;

        let corpus = generate_dataset(&SynthConfig { n: 80, seed: 2, ..SynthConfig::default() });
        let engine = Engine::new(Lexicon::builtin().unwrap()).with_paraphrases(corpus.paraphrases.clone());
        let data = &corpus.dataset;
        let items = transform_dataset(&engine, data, &ALL_CATEGORIES, false, 0);
        let vocab = Vocab::build(data.samples().iter().map(|s| data.sentence_of(s).surfaces()));
        let dims = Dims::new(data.context_dim());
        let mut model = ToyGroundedModel::init(vocab, dims, 4);
        let input = dims.input();
        for (i, w) in model.block_mut(Block::HiddenWeight).iter_mut().enumerate() {
            if i % input >= dims.embed {
                *w = 0.0;
            }
        }
        let probe = text_only_bias(&model, data, &items).unwrap();
        let sisp = sisp_accuracy(&model, data, &items).unwrap();
        assert_eq!(probe, sisp);
        assert_eq!(text_only_bias(&model, data, &[]), Err(EvalError::NoPredictions));
    }

    #[test]
    fn alpha_is_validated() {
        use crate::lexicon::Lexicon;
        let engine = Engine::new(Lexicon::builtin().unwrap());
        let model = ToyGroundedModel::zeroed(crate::model::Vocab::default(), crate::model::Dims::new(0));
        let err = ensemble_predictions(&model, &engine, &Dataset::new(), &ALL_CATEGORIES, 1.5, 0);
        assert_eq!(err, Err(EvalError::Alpha(1.5)));
    }
}

