//! Per-epoch adversarial augmentation: pick a random subset of the training
//! set, score every applicable transform of it with the current model,
//! keep the worst ones and train on the result.

mod select;

pub use select::{
    assemble_augmented, group_k, sample_subset, select_group_wise, select_random, select_sample_wise, AdvSelection,
    Choice, LossTable, Slot,
};

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Dataset, Label};
use crate::model::{Dims, Example, ToyGroundedModel, Vocab, DEFAULT_BATCH_SIZE, DEFAULT_EMBED_DIM, DEFAULT_HIDDEN, DEFAULT_LR};
use crate::transforms::{Category, Engine, Scope, Source, TransformedSample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Plain training on the original data.
    Base,
    /// One uniformly random applicable transform per subset row.
    DataAug,
    /// The highest-loss transform per subset row.
    #[serde(rename = "sw")]
    SampleWise,
    /// The k highest-loss rows per transform category.
    #[serde(rename = "gw")]
    GroupWise,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "base" => Some(Variant::Base),
            "dataaug" => Some(Variant::DataAug),
            "sw" => Some(Variant::SampleWise),
            "gw" => Some(Variant::GroupWise),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Base => "base",
            Variant::DataAug => "dataaug",
            Variant::SampleWise => "sw",
            Variant::GroupWise => "gw",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdroConfig {
    pub t: f64,
    pub variant: Variant,
    pub scope: Scope,
    pub positives_only: bool,
    pub epochs: usize,
    pub seed: u64,
    pub lr: f64,
    pub batch_size: usize,
    /// Draw the subset once instead of every epoch.
    pub fixed_subset: bool,
    /// Epochs of plain training before the first adversarial round.
    pub warmup_epochs: usize,
    pub embed_dim: usize,
    pub hidden: usize,
}

impl Default for SdroConfig {
    fn default() -> Self {
        SdroConfig {
            t: 0.2,
            variant: Variant::GroupWise,
            scope: Scope::Both,
            positives_only: false,
            epochs: 10,
            seed: 0,
            lr: DEFAULT_LR,
            batch_size: DEFAULT_BATCH_SIZE,
            fixed_subset: false,
            warmup_epochs: 1,
            embed_dim: DEFAULT_EMBED_DIM,
            hidden: DEFAULT_HIDDEN,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("T must lie in [0, 1], got {0}")]
    Fraction(f64),
    #[error("learning rate must be finite and non-negative, got {0}")]
    LearningRate(f64),
    #[error("batch size must be positive")]
    BatchSize,
    #[error("model dimensions must be positive")]
    Dims,
}

impl SdroConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.t) {
            return Err(ConfigError::Fraction(self.t));
        }
        if !self.lr.is_finite() || self.lr < 0.0 {
            return Err(ConfigError::LearningRate(self.lr));
        }
        if self.batch_size == 0 {
            return Err(ConfigError::BatchSize);
        }
        if self.embed_dim == 0 || self.hidden == 0 {
            return Err(ConfigError::Dims);
        }
        Ok(())
    }

    pub fn categories(&self) -> Vec<Category> {
        self.scope.categories()
    }
}

const SUBSET_STREAM: u64 = 0x5eed_0001;
const SELECT_STREAM: u64 = 0x5eed_0002;
const SHUFFLE_STREAM: u64 = 0x5eed_0003;

fn stream(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

/// Every applicable transform of every sample, computed once.
#[derive(Clone, Debug)]
pub struct TransformCache {
    pub columns: Vec<Category>,
    /// Per sample, per column.
    pub outputs: Vec<Vec<Option<TransformedSample>>>,
}

impl TransformCache {
    /// Transforms of `data`'s samples under `columns`. With
    /// `positives_only`, samples labeled False get no transforms.
    pub fn build(engine: &Engine, data: &Dataset, columns: &[Category], positives_only: bool, seed: u64) -> Self {
        let outputs = data
            .samples()
            .iter()
            .map(|s| {
                let mut row = vec![None; columns.len()];
                if positives_only && s.label != Label::True {
                    return row;
                }
                let src = Source::new(&s.id, data.sentence_of(s), s.label);
                for (slot, &c) in row.iter_mut().zip(columns) {
                    *slot = engine.apply(c, &src, seed);
                }
                row
            })
            .collect();
        TransformCache {
            columns: columns.to_vec(),
            outputs,
        }
    }

    pub fn get(&self, sample: usize, col: usize) -> Option<&TransformedSample> {
        self.outputs[sample][col].as_ref()
    }
}

/// Vocabulary over the originals and all their cached transforms.
pub fn training_vocab(data: &Dataset, cache: &TransformCache) -> Vocab {
    let originals = data.samples().iter().map(|s| data.sentence_of(s).surfaces());
    let transformed = cache.outputs.iter().flatten().flatten().map(|t| t.tokens.clone());
    Vocab::build(originals.chain(transformed))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub epoch: usize,
    pub sample_id: String,
    pub group: Category,
    pub loss: f64,
    pub selected: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    /// Sample ids of the epoch's subset, in dataset order.
    pub subset: Vec<String>,
    pub selected: usize,
    pub per_group: Vec<usize>,
    pub k: usize,
    pub augmented_size: usize,
    pub mean_loss: f64,
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: ToyGroundedModel,
    pub trace: Vec<TraceRow>,
    pub epochs: Vec<EpochStats>,
}

impl TrainOutcome {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("epoch,sample_id,group,loss,selected\n");
        for r in &self.trace {
            out.push_str(&format!("{},{},{},{},{}\n", r.epoch, r.sample_id, r.group, r.loss, r.selected));
        }
        out
    }
}

/// Loss of each cached transform for the subset rows, with the model in
/// inference mode.
pub fn compute_loss_table(
    model: &ToyGroundedModel,
    data: &Dataset,
    cache: &TransformCache,
    subset: &[usize],
) -> LossTable {
    let mut values = Vec::with_capacity(subset.len() * cache.columns.len());
    for &i in subset {
        let ctx = data.context_of(&data.samples()[i]).as_slice();
        for c in 0..cache.columns.len() {
            values.push(cache.get(i, c).map(|t| model.loss(&model.example(&t.tokens, ctx, t.label))));
        }
    }
    LossTable::new(subset.len(), cache.columns.clone(), values)
}

/// Trains `model` in place on `data` (every sample is used; callers pick
/// the split) following `config`.
pub fn train_model(
    config: &SdroConfig,
    model: &mut ToyGroundedModel,
    data: &Dataset,
    cache: &TransformCache,
) -> Result<(Vec<TraceRow>, Vec<EpochStats>), ConfigError> {
    config.validate()?;
    let n = data.len();
    let originals: Vec<Example> = data
        .samples()
        .iter()
        .map(|s| model.example(&data.sentence_of(s).surfaces(), data.context_of(s).as_slice(), s.label))
        .collect();
    let mut subset_rng = stream(config.seed, SUBSET_STREAM);
    let mut select_rng = stream(config.seed, SELECT_STREAM);
    let mut shuffle_rng = stream(config.seed, SHUFFLE_STREAM);
    let mut fixed: Option<Vec<usize>> = None;
    let mut trace = Vec::new();
    let mut stats = Vec::new();

    for epoch in 0..config.epochs {
        let adversarial = config.variant != Variant::Base && epoch >= config.warmup_epochs;
        let (subset, selection) = if adversarial {
            let subset = match (&fixed, config.fixed_subset) {
                (Some(s), true) => s.clone(),
                _ => {
                    let (s, _) = sample_subset(n, config.t, &mut subset_rng);
                    if config.fixed_subset {
                        fixed = Some(s.clone());
                    }
                    s
                }
            };
            let table = compute_loss_table(model, data, cache, &subset);
            let selection = match config.variant {
                Variant::DataAug => select_random(&table, &mut select_rng),
                Variant::SampleWise => select_sample_wise(&table),
                Variant::GroupWise => select_group_wise(&table),
                Variant::Base => unreachable!(),
            };
            for (r, &i) in subset.iter().enumerate() {
                for (c, &group) in table.columns.iter().enumerate() {
                    if let Some(loss) = table.get(r, c) {
                        trace.push(TraceRow {
                            epoch,
                            sample_id: data.samples()[i].id.clone(),
                            group,
                            loss,
                            selected: selection.contains(r, c),
                        });
                    }
                }
            }
            (subset, selection)
        } else {
            (Vec::new(), AdvSelection::default())
        };

        let mut slots = assemble_augmented(n, &subset, &selection);
        slots.shuffle(&mut shuffle_rng);
        let examples: Vec<Example> = slots
            .iter()
            .map(|slot| match *slot {
                Slot::Original(i) => originals[i].clone(),
                Slot::Transformed { sample, col } => {
                    let t = cache.get(sample, col).expect("selected entries are present");
                    model.example(&t.tokens, data.context_of(&data.samples()[sample]).as_slice(), t.label)
                }
            })
            .collect();
        let mut total = 0.0;
        for batch in examples.chunks(config.batch_size) {
            total += model.train_step(batch, config.lr) * batch.len() as f64;
        }
        stats.push(EpochStats {
            epoch,
            subset: subset.iter().map(|&i| data.samples()[i].id.clone()).collect(),
            selected: selection.len(),
            per_group: if adversarial { selection.per_group.clone() } else { Vec::new() },
            k: group_k(subset.len(), cache.columns.len()),
            augmented_size: slots.len(),
            mean_loss: if examples.is_empty() { 0.0 } else { total / examples.len() as f64 },
        });
    }
    Ok((trace, stats))
}

/// Builds the transform cache and vocabulary, initializes a model from
/// `config.seed` and trains it.
pub fn run_training(config: &SdroConfig, engine: &Engine, data: &Dataset) -> Result<TrainOutcome, ConfigError> {
    config.validate()?;
    let cache = TransformCache::build(engine, data, &config.categories(), config.positives_only, config.seed);
    let vocab = training_vocab(data, &cache);
    let dims = Dims {
        embed: config.embed_dim,
        hidden: config.hidden,
        context: data.context_dim(),
    };
    let mut model = ToyGroundedModel::init(vocab, dims, config.seed);
    let (trace, epochs) = train_model(config, &mut model, data, &cache)?;
    Ok(TrainOutcome { model, trace, epochs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;
    use crate::synthtask::{generate_dataset, SynthConfig};
    use crate::transforms::{Polarity, ALL_CATEGORIES};
    use proptest::prelude::*;

    fn setup(n: usize) -> (Engine, Dataset) {
        let corpus = generate_dataset(&SynthConfig { n, seed: 5, ..SynthConfig::default() });
        let engine = Engine::new(Lexicon::builtin().unwrap()).with_paraphrases(corpus.paraphrases.clone());
        (engine, corpus.dataset)
    }

    fn brute_sample_wise(rows: &[Vec<Option<f64>>]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let mut best: Option<(usize, f64)> = None;
            for (c, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    match best {
                        Some((_, b)) if b >= *v => {}
                        _ => best = Some((c, *v)),
                    }
                }
            }
            if let Some((c, _)) = best {
                out.push((r, c));
            }
        }
        out
    }

    fn brute_group_wise(rows: &[Vec<Option<f64>>], cols: usize) -> Vec<(usize, usize)> {
        let k = rows.len() / cols;
        let mut out = Vec::new();
        for c in 0..cols {
            // Entry (r, c) is kept when fewer than k entries beat it.
            for (r, row) in rows.iter().enumerate() {
                let Some(v) = row[c] else { continue };
                let better = rows
                    .iter()
                    .enumerate()
                    .filter(|(r2, row2)| row2[c].is_some_and(|w| w > v || (w == v && r2 < &r)))
                    .count();
                if better < k {
                    out.push((r, c));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn loss_rows(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Option<f64>>>> {
        let cell = prop_oneof![1 => Just(None), 9 => (0u8..20).prop_map(|v| Some(v as f64 / 4.0))];
        prop::collection::vec(prop::collection::vec(cell, cols), rows)
    }

    fn to_table(rows: &[Vec<Option<f64>>], cols: usize) -> LossTable {
        LossTable::new(rows.len(), ALL_CATEGORIES[..cols].to_vec(), rows.concat())
    }

    fn pairs(s: &AdvSelection) -> Vec<(usize, usize)> {
        s.chosen.iter().map(|c| (c.row, c.col)).collect()
    }

    proptest! {
        #[test]
        fn sample_wise_matches_brute_force(rows in loss_rows(20, 13)) {
            prop_assert_eq!(pairs(&select_sample_wise(&to_table(&rows, 13))), brute_sample_wise(&rows));
        }

        #[test]
        fn group_wise_matches_brute_force(rows in (1usize..60).prop_flat_map(|n| loss_rows(n, 5))) {
            let sel = select_group_wise(&to_table(&rows, 5));
            prop_assert_eq!(pairs(&sel), brute_group_wise(&rows, 5));
            prop_assert!(sel.per_group.iter().all(|&g| g <= rows.len() / 5));
        }

        #[test]
        fn assembly_preserves_size(n in 1usize..80, t in 0.0f64..=1.0, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (subset, _) = sample_subset(n, t, &mut rng);
            let cols = 13;
            let values: Vec<Option<f64>> = (0..subset.len() * cols)
                .map(|i| (i % 3 != 0).then_some((i * 7 % 11) as f64))
                .collect();
            let table = LossTable::new(subset.len(), ALL_CATEGORIES.to_vec(), values);
            for sel in [select_sample_wise(&table), select_group_wise(&table), select_random(&table, &mut rng)] {
                prop_assert_eq!(assemble_augmented(n, &subset, &sel).len(), n);
            }
        }
    }

    #[test]
    fn zero_model_loss_is_ln2() {
        let (engine, data) = setup(60);
        let cache = TransformCache::build(&engine, &data, &ALL_CATEGORIES, false, 0);
        let model = ToyGroundedModel::zeroed(training_vocab(&data, &cache), Dims::new(data.context_dim()));
        let subset: Vec<usize> = (0..data.len()).collect();
        let table = compute_loss_table(&model, &data, &cache, &subset);
        assert!(table.present() > 0);
        for r in 0..table.rows {
            for c in 0..table.cols() {
                if let Some(v) = table.get(r, c) {
                    assert!((v - std::f64::consts::LN_2).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn variants_share_subsets_and_keep_size() {
        let (engine, data) = setup(200);
        let mut subsets = Vec::new();
        for variant in [Variant::DataAug, Variant::SampleWise, Variant::GroupWise] {
            let config = SdroConfig { variant, epochs: 4, ..SdroConfig::default() };
            let out = run_training(&config, &engine, &data).unwrap();
            for e in &out.epochs {
                assert_eq!(e.augmented_size, data.len());
                if variant == Variant::GroupWise {
                    assert!(e.per_group.iter().all(|&g| g <= e.k));
                }
            }
            assert!(out.epochs[0].subset.is_empty());
            subsets.push(out.epochs.iter().map(|e| e.subset.clone()).collect::<Vec<_>>());
        }
        assert_eq!(subsets[0], subsets[1]);
        assert_eq!(subsets[1], subsets[2]);
        assert_eq!(subsets[0][1].len(), 40);
    }

    #[test]
    fn zero_epochs_leave_model_unchanged() {
        let (engine, data) = setup(50);
        let config = SdroConfig { epochs: 0, ..SdroConfig::default() };
        let out = run_training(&config, &engine, &data).unwrap();
        let cache = TransformCache::build(&engine, &data, &config.categories(), false, config.seed);
        let fresh = ToyGroundedModel::init(training_vocab(&data, &cache), Dims {
            embed: config.embed_dim,
            hidden: config.hidden,
            context: data.context_dim(),
        }, config.seed);
        assert_eq!(out.model, fresh);
        assert!(out.trace.is_empty());
    }

    #[test]
    fn scope_restricts_selected_groups() {
        let (engine, data) = setup(120);
        for (scope, pol) in [(Scope::Sp, Polarity::SP), (Scope::Si, Polarity::SI)] {
            let config = SdroConfig { scope, epochs: 3, variant: Variant::SampleWise, ..SdroConfig::default() };
            let out = run_training(&config, &engine, &data).unwrap();
            assert!(!out.trace.is_empty());
            assert!(out.trace.iter().all(|r| r.group.polarity() == pol));
        }
    }

    #[test]
    fn trace_csv_and_determinism() {
        let (engine, data) = setup(80);
        let config = SdroConfig { epochs: 3, ..SdroConfig::default() };
        let a = run_training(&config, &engine, &data).unwrap();
        let b = run_training(&config, &engine, &data).unwrap();
        assert_eq!(a.model, b.model);
        let csv = a.trace_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("epoch,sample_id,group,loss,selected"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), a.trace.len());
        assert!(rows.iter().all(|l| l.split(',').count() == 5));
        let selected = a.trace.iter().filter(|r| r.selected).count();
        assert_eq!(selected, a.epochs.iter().map(|e| e.selected).sum::<usize>());
    }

    #[test]
    fn rejects_bad_config() {
        let bad = SdroConfig { t: 1.5, ..SdroConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::Fraction(1.5)));
        let bad = SdroConfig { batch_size: 0, ..SdroConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::BatchSize));
    }
}
