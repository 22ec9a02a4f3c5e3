//! End-to-end runs on the synthetic task: generate, transform the test set,
//! train a variant, evaluate. Shared by the CLI sweeps and the acceptance
//! tests.

use serde::Serialize;

use crate::corpus::{Dataset, Split};
use crate::evalsuite::{evaluate, EvalError, MetricsReport};
use crate::lexicon::{Lexicon, LexiconError};
use crate::sdro::{run_training, ConfigError, SdroConfig, TrainOutcome, Variant};
use crate::synthtask::{generate_dataset, SynthConfig, SynthCorpus};
use crate::transforms::{transform_dataset, Engine, TransformedSample, ALL_CATEGORIES};

/// Seed of the test-set transforms; fixed so every run is scored on the
/// same transformed sentences.
pub const TEST_TRANSFORM_SEED: u64 = 0;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("{0}")]
    Invalid(String),
}

/// A corpus split into train and test, with the test set's transforms.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub engine: Engine,
    pub train: Dataset,
    pub test: Dataset,
    pub test_transforms: Vec<TransformedSample>,
}

impl Prepared {
    pub fn from_corpus(corpus: &SynthCorpus, lexicon: Lexicon) -> Self {
        let engine = Engine::new(lexicon).with_paraphrases(corpus.paraphrases.clone());
        Self::from_dataset(&corpus.dataset, engine)
    }

    pub fn from_dataset(data: &Dataset, engine: Engine) -> Self {
        let train = data.split(Split::Train);
        let test = data.split(Split::Test);
        let test_transforms = transform_dataset(&engine, &test, &ALL_CATEGORIES, false, TEST_TRANSFORM_SEED);
        Prepared {
            engine,
            train,
            test,
            test_transforms,
        }
    }

    pub fn synthetic(config: &SynthConfig) -> Result<Self, ExperimentError> {
        Ok(Self::from_corpus(&generate_dataset(config), Lexicon::builtin()?))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunResult {
    pub variant: Variant,
    pub t: f64,
    pub seed: u64,
    pub data_frac: f64,
    pub report: MetricsReport,
}

impl RunResult {
    pub fn clean(&self) -> f64 {
        self.report.clean.unwrap_or(f64::NAN)
    }

    pub fn sp(&self) -> f64 {
        self.report.sp_avg.unwrap_or(f64::NAN)
    }

    pub fn si(&self) -> f64 {
        self.report.si_avg.unwrap_or(f64::NAN)
    }

    pub fn sisp(&self) -> f64 {
        self.report.sisp_avg.unwrap_or(f64::NAN)
    }
}

/// Trains on the first `data_frac` of the training split and evaluates on
/// the test split.
pub fn run(prepared: &Prepared, config: &SdroConfig, data_frac: f64) -> Result<(TrainOutcome, RunResult), ExperimentError> {
    if !(data_frac > 0.0 && data_frac <= 1.0) {
        return Err(ExperimentError::Invalid(format!("data fraction must lie in (0, 1], got {data_frac}")));
    }
    let train = prepared.train.head_fraction(data_frac);
    let outcome = run_training(config, &prepared.engine, &train)?;
    let report = evaluate(&outcome.model, &prepared.test, &prepared.test_transforms)?;
    let result = RunResult {
        variant: config.variant,
        t: config.t,
        seed: config.seed,
        data_frac,
        report,
    };
    Ok((outcome, result))
}

pub const SWEEP_T_HEADER: &str = "variant,t,seed,clean,sp,si,sisp";

pub fn sweep_t_row(r: &RunResult) -> String {
    format!("{},{},{},{},{},{},{}", r.variant, r.t, r.seed, r.clean(), r.sp(), r.si(), r.sisp())
}

/// Every (variant, T, seed) combination; `t_grid` holds fractions.
pub fn sweep_t(
    prepared: &Prepared,
    base: &SdroConfig,
    variants: &[Variant],
    t_grid: &[f64],
    seeds: &[u64],
) -> Result<Vec<RunResult>, ExperimentError> {
    let mut out = Vec::new();
    for &variant in variants {
        for &t in t_grid {
            for &seed in seeds {
                let config = SdroConfig {
                    variant,
                    t,
                    seed,
                    ..base.clone()
                };
                out.push(run(prepared, &config, 1.0)?.1);
            }
        }
    }
    Ok(out)
}

pub const SWEEP_SIZE_HEADER: &str = "variant,data_frac,seed,clean,sp,si,sisp";

pub fn sweep_size_row(r: &RunResult) -> String {
    format!("{},{},{},{},{},{},{}", r.variant, r.data_frac, r.seed, r.clean(), r.sp(), r.si(), r.sisp())
}

pub fn sweep_size(
    prepared: &Prepared,
    base: &SdroConfig,
    variants: &[Variant],
    fracs: &[f64],
    seeds: &[u64],
) -> Result<Vec<RunResult>, ExperimentError> {
    let mut out = Vec::new();
    for &variant in variants {
        for &frac in fracs {
            for &seed in seeds {
                let config = SdroConfig {
                    variant,
                    seed,
                    ..base.clone()
                };
                out.push(run(prepared, &config, frac)?.1);
            }
        }
    }
    Ok(out)
}

/// Per-variant summary of a size sweep: area under the seed-averaged
/// accuracy curves (trapezoid rule over the data fraction, normalized by
/// the fraction range) and whether each curve is non-decreasing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeAuc {
    pub variant: Variant,
    pub clean_auc: f64,
    pub sisp_auc: f64,
    pub clean_monotone: bool,
    pub sisp_monotone: bool,
}

pub const SIZE_AUC_HEADER: &str = "variant,clean_auc,sisp_auc,clean_monotone,sisp_monotone";

impl SizeAuc {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.variant, self.clean_auc, self.sisp_auc, self.clean_monotone, self.sisp_monotone
        )
    }
}

/// Trapezoid area under `(x, y)` points sorted by x, divided by the x range.
/// A single point yields its y value.
pub fn normalized_auc(points: &[(f64, f64)]) -> f64 {
    match points {
        [] => f64::NAN,
        [(_, y)] => *y,
        _ => {
            let area: f64 = points.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0).sum();
            area / (points[points.len() - 1].0 - points[0].0)
        }
    }
}

fn non_decreasing(points: &[(f64, f64)]) -> bool {
    points.windows(2).all(|w| w[1].1 >= w[0].1)
}

/// Seed-averaged `(x, y)` curve for one variant, sorted by x.
pub fn averaged_curve(
    results: &[RunResult],
    variant: Variant,
    x: impl Fn(&RunResult) -> f64,
    y: impl Fn(&RunResult) -> f64,
) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = results.iter().filter(|r| r.variant == variant).map(&x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.into_iter()
        .map(|xv| {
            let ys: Vec<f64> = results
                .iter()
                .filter(|r| r.variant == variant && x(r) == xv)
                .map(&y)
                .collect();
            (xv, ys.iter().sum::<f64>() / ys.len() as f64)
        })
        .collect()
}

pub fn size_auc(results: &[RunResult], variants: &[Variant]) -> Vec<SizeAuc> {
    variants
        .iter()
        .map(|&variant| {
            let clean = averaged_curve(results, variant, |r| r.data_frac, RunResult::clean);
            let sisp = averaged_curve(results, variant, |r| r.data_frac, RunResult::sisp);
            SizeAuc {
                variant,
                clean_auc: normalized_auc(&clean),
                sisp_auc: normalized_auc(&sisp),
                clean_monotone: non_decreasing(&clean),
                sisp_monotone: non_decreasing(&sisp),
            }
        })
        .collect()
}

/// Ranks starting at 1; ties share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson correlation of average ranks).
/// `None` when either side is constant or the inputs are shorter than 2.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 {
        return None;
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}
