//! Command-line interface. Every command writes `manifest.json` next to its
//! outputs. Exit codes: 0 success, 1 invalid arguments or configuration,
//! 2 unreadable or malformed data.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::corpus::{CorpusError, Dataset, Split};
use crate::evalsuite::{
    clean_predictions, correctness, ensemble_predictions, evaluate, reliability, text_only_bias, EvalError,
    DEFAULT_ALPHA, DEFAULT_BINS,
};
use crate::experiments::{
    size_auc, sweep_size, sweep_size_row, sweep_t, sweep_t_row, ExperimentError, Prepared, SIZE_AUC_HEADER,
    SWEEP_SIZE_HEADER, SWEEP_T_HEADER, TEST_TRANSFORM_SEED,
};
use crate::lexicon::{Lexicon, LexiconError};
use crate::model::{CheckpointError, ToyGroundedModel, DEFAULT_BATCH_SIZE, DEFAULT_EMBED_DIM, DEFAULT_HIDDEN, DEFAULT_LR};
use crate::sdro::{run_training, ConfigError, SdroConfig, Variant};
use crate::synthtask::{generate_dataset, SynthConfig};
use crate::transforms::{
    parse_transformed, transform_dataset, transformed_jsonl, Engine, ParaphraseTable, Scope, TransformedSample,
    ALL_CATEGORIES, TRANSFORMED_FILE,
};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MODEL_FILE: &str = "model.ckpt";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<LexiconError> for CliError {
    fn from(e: LexiconError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<CheckpointError> for CliError {
    fn from(e: CheckpointError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Alpha(_) | EvalError::Bins => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(e) => e.into(),
            ExperimentError::Eval(e) => e.into(),
            ExperimentError::Lexicon(e) => e.into(),
            ExperimentError::Invalid(m) => CliError::Usage(m),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "sdro", version, about = "Linguistic transforms and robust training for grounded statement classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic scene/statement corpus.
    GenSynth(GenSynthArgs),
    /// Write every applicable transform of a corpus.
    Transform(TransformArgs),
    /// Train a model on the train split.
    Train(TrainArgs),
    /// Clean, per-category and averaged SP/SI accuracy.
    Eval(EvalArgs),
    /// Accuracy of test-time ensembling over transforms.
    Ensemble(EnsembleArgs),
    /// Reliability bins and expected calibration error.
    Calibrate(CalibrateArgs),
    /// Transformed-set accuracy with the context zeroed out.
    BiasEval(EvalArgs),
    /// Train and evaluate over a grid of T values.
    SweepT(SweepTArgs),
    /// Train and evaluate on growing fractions of the training set.
    SweepSize(SweepSizeArgs),
}

#[derive(Args, Debug)]
pub struct GenSynthArgs {
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub val_frac: f64,
    #[arg(long, default_value_t = 0.1)]
    pub test_frac: f64,
    /// Probability that a statement is negated.
    #[arg(long, default_value_t = 0.2)]
    pub negated_frac: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Corpus directory (samples.jsonl, sentences.conllu, contexts.tsv).
    #[arg(long)]
    pub data: PathBuf,
    /// sp, si or both.
    #[arg(long, default_value = "both")]
    pub scope: String,
    /// Only transform samples labeled True.
    #[arg(long)]
    pub positives_only: bool,
    /// train, val, test or all.
    #[arg(long, default_value = "all")]
    pub split: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct TrainOpts {
    /// Fraction of the training set replaced by transforms each epoch.
    #[arg(long, default_value_t = 0.2)]
    pub t: f64,
    #[arg(long, default_value_t = 10)]
    pub epochs: usize,
    #[arg(long, default_value_t = DEFAULT_LR)]
    pub lr: f64,
    #[arg(long, default_value_t = DEFAULT_BATCH_SIZE)]
    pub batch_size: usize,
    /// sp, si or both.
    #[arg(long, default_value = "both")]
    pub scope: String,
    #[arg(long)]
    pub positives_only: bool,
    /// Draw the transformed subset once instead of every epoch.
    #[arg(long)]
    pub fixed_subset: bool,
    #[arg(long, default_value_t = 1)]
    pub warmup_epochs: usize,
    #[arg(long, default_value_t = DEFAULT_EMBED_DIM)]
    pub embed_dim: usize,
    #[arg(long, default_value_t = DEFAULT_HIDDEN)]
    pub hidden: usize,
}

impl TrainOpts {
    fn config(&self, variant: Variant, seed: u64) -> Result<SdroConfig, CliError> {
        let config = SdroConfig {
            t: self.t,
            variant,
            scope: parse_scope(&self.scope)?,
            positives_only: self.positives_only,
            epochs: self.epochs,
            seed,
            lr: self.lr,
            batch_size: self.batch_size,
            fixed_subset: self.fixed_subset,
            warmup_epochs: self.warmup_epochs,
            embed_dim: self.embed_dim,
            hidden: self.hidden,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Corpus directory written by gen-synth (required).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// base, dataaug, sw or gw.
    #[arg(long, default_value = "gw")]
    pub variant: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Leading fraction of the training split to train on.
    #[arg(long, default_value_t = 1.0)]
    pub data_frac: f64,
    #[command(flatten)]
    pub opts: TrainOpts,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// train, val, test or all.
    #[arg(long, default_value = "test")]
    pub split: String,
    /// Precomputed transforms (JSONL); computed on the fly when absent.
    #[arg(long)]
    pub transformed: Option<PathBuf>,
    #[arg(long, default_value_t = TEST_TRANSFORM_SEED)]
    pub transform_seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value = "test")]
    pub split: String,
    /// Weight of the original prediction.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value = "both")]
    pub scope: String,
    #[arg(long, default_value_t = TEST_TRANSFORM_SEED)]
    pub transform_seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value = "test")]
    pub split: String,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Calibrate ensembled predictions with this alpha instead of the raw ones.
    #[arg(long)]
    pub ensemble_alpha: Option<f64>,
    #[arg(long, default_value_t = TEST_TRANSFORM_SEED)]
    pub transform_seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepData {
    /// Corpus directory; a synthetic corpus is generated when absent.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Size of the generated corpus.
    #[arg(long, default_value_t = 2500)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub synth_seed: u64,
    /// Training seeds 0..seeds.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
}

#[derive(Args, Debug)]
pub struct SweepTArgs {
    /// T values in percent.
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,60,80")]
    pub grid: Vec<f64>,
    /// Variants to sweep (base, dataaug, sw, gw).
    #[arg(long, value_delimiter = ',', default_value = "gw")]
    pub variants: Vec<String>,
    #[command(flatten)]
    pub data: SweepData,
    #[command(flatten)]
    pub opts: TrainOpts,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepSizeArgs {
    /// Training-set fractions in percent.
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,80,100")]
    pub grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "base,gw")]
    pub variants: Vec<String>,
    #[command(flatten)]
    pub data: SweepData,
    #[command(flatten)]
    pub opts: TrainOpts,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_scope(s: &str) -> Result<Scope, CliError> {
    Scope::parse(s).ok_or_else(|| CliError::Usage(format!("unknown scope `{s}` (expected sp, si or both)")))
}

fn parse_variant(s: &str) -> Result<Variant, CliError> {
    Variant::parse(s).ok_or_else(|| CliError::Usage(format!("unknown variant `{s}` (expected base, dataaug, sw or gw)")))
}

fn parse_split(s: &str) -> Result<Option<Split>, CliError> {
    if s == "all" {
        return Ok(None);
    }
    Split::parse(s)
        .map(Some)
        .ok_or_else(|| CliError::Usage(format!("unknown split `{s}` (expected train, val, test or all)")))
}

fn select_split(data: &Dataset, split: Option<Split>) -> Dataset {
    match split {
        Some(s) => data.split(s),
        None => data.clone(),
    }
}

fn require_dir(path: &Path) -> Result<(), CliError> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(CliError::Data(format!("{}: not a directory", path.display())))
    }
}

fn load_corpus(dir: &Path) -> Result<(Dataset, Engine), CliError> {
    require_dir(dir)?;
    let data = Dataset::load_dir(dir)?;
    let engine = Engine::new(Lexicon::builtin()?).with_paraphrases(ParaphraseTable::load_dir_if_present(dir)?);
    Ok((data, engine))
}

fn create_out(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<String, CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(name.to_owned())
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn percent_grid(grid: &[f64]) -> Result<Vec<f64>, CliError> {
    grid.iter()
        .map(|&v| {
            if (0.0..=100.0).contains(&v) {
                Ok(v / 100.0)
            } else {
                Err(CliError::Usage(format!("grid value {v} is not a percentage")))
            }
        })
        .collect()
}

struct Report {
    command: &'static str,
    config: Value,
    seeds: Vec<u64>,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

fn write_manifest(out: &Path, report: Report, started: Instant) -> Result<(), CliError> {
    let unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = json!({
        "command": report.command,
        "config": report.config,
        "seeds": report.seeds,
        "inputs": report.inputs,
        "outputs": report.outputs,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "finished_unix": unix,
        "wall_clock_secs": started.elapsed().as_secs_f64(),
    });
    write(out, MANIFEST_FILE, &serde_json::to_string_pretty(&manifest).expect("manifest serializes"))?;
    Ok(())
}

fn train_config_json(c: &SdroConfig) -> Value {
    serde_json::to_value(c).expect("config serializes")
}

fn gen_synth(a: &GenSynthArgs) -> Result<Report, CliError> {
    for (name, v) in [("val-frac", a.val_frac), ("test-frac", a.test_frac), ("negated-frac", a.negated_frac)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::Usage(format!("--{name} must lie in [0, 1], got {v}")));
        }
    }
    if a.val_frac + a.test_frac > 1.0 {
        return Err(CliError::Usage("--val-frac + --test-frac exceeds 1".into()));
    }
    let config = SynthConfig {
        n: a.n,
        seed: a.seed,
        val_frac: a.val_frac,
        test_frac: a.test_frac,
        negated_frac: a.negated_frac,
    };
    create_out(&a.out)?;
    let corpus = generate_dataset(&config);
    corpus.write_dir(&a.out)?;
    let outputs = std::fs::read_dir(&a.out)
        .map_err(|e| CliError::Data(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .filter(|n| n != MANIFEST_FILE)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(Report {
        command: "gen-synth",
        config: json!({
            "n": a.n, "seed": a.seed, "val_frac": a.val_frac,
            "test_frac": a.test_frac, "negated_frac": a.negated_frac,
        }),
        seeds: vec![a.seed],
        inputs: Vec::new(),
        outputs,
    })
}

fn transform(a: &TransformArgs) -> Result<Report, CliError> {
    let scope = parse_scope(&a.scope)?;
    let split = parse_split(&a.split)?;
    let (data, engine) = load_corpus(&a.data)?;
    let data = select_split(&data, split);
    let items = transform_dataset(&engine, &data, &scope.categories(), a.positives_only, a.seed);
    create_out(&a.out)?;
    let out = write(&a.out, TRANSFORMED_FILE, &transformed_jsonl(&items))?;
    Ok(Report {
        command: "transform",
        config: json!({
            "scope": scope.as_str(), "positives_only": a.positives_only,
            "split": a.split, "count": items.len(),
        }),
        seeds: vec![a.seed],
        inputs: vec![path_str(&a.data)],
        outputs: vec![out],
    })
}

fn train(a: &TrainArgs) -> Result<Report, CliError> {
    let variant = parse_variant(&a.variant)?;
    let config = a.opts.config(variant, a.seed)?;
    if !(a.data_frac > 0.0 && a.data_frac <= 1.0) {
        return Err(CliError::Usage(format!("--data-frac must lie in (0, 1], got {}", a.data_frac)));
    }
    let Some(dir) = &a.data else {
        return Err(CliError::Usage("train requires --data <DIR>".into()));
    };
    let (data, engine) = load_corpus(dir)?;
    let train = data.split(Split::Train).head_fraction(a.data_frac);
    let outcome = run_training(&config, &engine, &train)?;
    create_out(&a.out)?;
    outcome.model.save(&a.out.join(MODEL_FILE))?;
    let trace = write(&a.out, "trace.csv", &outcome.trace_csv())?;
    let epochs: Vec<Value> = outcome
        .epochs
        .iter()
        .map(|e| json!({"epoch": e.epoch, "selected": e.selected, "per_group": e.per_group, "k": e.k,
                        "augmented_size": e.augmented_size, "mean_loss": e.mean_loss}))
        .collect();
    let epochs = write(&a.out, "epochs.json", &serde_json::to_string_pretty(&epochs).expect("serializes"))?;
    let mut cfg = train_config_json(&config);
    cfg["data_frac"] = json!(a.data_frac);
    cfg["train_samples"] = json!(train.len());
    Ok(Report {
        command: "train",
        config: cfg,
        seeds: vec![a.seed],
        inputs: vec![path_str(dir)],
        outputs: vec![MODEL_FILE.into(), trace, epochs],
    })
}

fn eval_inputs(a: &EvalArgs) -> Result<(Dataset, ToyGroundedModel, Vec<TransformedSample>), CliError> {
    let split = parse_split(&a.split)?;
    let (data, engine) = load_corpus(&a.data)?;
    let data = select_split(&data, split);
    let model = ToyGroundedModel::load(&a.model)?;
    let items = match &a.transformed {
        Some(p) => parse_transformed(&std::fs::read_to_string(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?)?,
        None => transform_dataset(&engine, &data, &ALL_CATEGORIES, false, a.transform_seed),
    };
    if model.dims.context != data.context_dim() {
        return Err(CliError::Data(format!(
            "model expects context dimension {}, data has {}",
            model.dims.context,
            data.context_dim()
        )));
    }
    Ok((data, model, items))
}

fn eval_config(a: &EvalArgs) -> Value {
    json!({"split": a.split, "transformed": a.transformed.as_ref().map(|p| path_str(p))})
}

fn eval(a: &EvalArgs) -> Result<Report, CliError> {
    let (data, model, items) = eval_inputs(a)?;
    let report = evaluate(&model, &data, &items)?;
    create_out(&a.out)?;
    let outputs = vec![write(&a.out, "metrics.json", &report.to_json())?, write(&a.out, "metrics.csv", &report.to_csv())?];
    Ok(Report {
        command: "eval",
        config: eval_config(a),
        seeds: vec![a.transform_seed],
        inputs: vec![path_str(&a.data), path_str(&a.model)],
        outputs,
    })
}

fn bias_eval(a: &EvalArgs) -> Result<Report, CliError> {
    let (data, model, items) = eval_inputs(a)?;
    let bias = text_only_bias(&model, &data, &items)?;
    let full = evaluate(&model, &data, &items)?;
    let body = json!({"text_only": bias, "with_context": full});
    create_out(&a.out)?;
    let out = write(&a.out, "bias.json", &serde_json::to_string_pretty(&body).expect("serializes"))?;
    Ok(Report {
        command: "bias-eval",
        config: eval_config(a),
        seeds: vec![a.transform_seed],
        inputs: vec![path_str(&a.data), path_str(&a.model)],
        outputs: vec![out],
    })
}

fn ensemble(a: &EnsembleArgs) -> Result<Report, CliError> {
    let scope = parse_scope(&a.scope)?;
    let split = parse_split(&a.split)?;
    if !(0.0..=1.0).contains(&a.alpha) {
        return Err(EvalError::Alpha(a.alpha).into());
    }
    let (data, engine) = load_corpus(&a.data)?;
    let data = select_split(&data, split);
    let model = ToyGroundedModel::load(&a.model)?;
    let preds = ensemble_predictions(&model, &engine, &data, &scope.categories(), a.alpha, a.transform_seed)?;
    let clean = clean_predictions(&model, &data);
    let acc = |p: &[(f64, crate::corpus::Label)]| {
        let c = correctness(p);
        (!c.is_empty()).then(|| c.iter().filter(|x| x.1).count() as f64 / c.len() as f64)
    };
    let body = json!({"alpha": a.alpha, "n": preds.len(), "accuracy": acc(&preds), "clean_accuracy": acc(&clean)});
    create_out(&a.out)?;
    let out = write(&a.out, "ensemble.json", &serde_json::to_string_pretty(&body).expect("serializes"))?;
    Ok(Report {
        command: "ensemble",
        config: json!({"alpha": a.alpha, "scope": scope.as_str(), "split": a.split}),
        seeds: vec![a.transform_seed],
        inputs: vec![path_str(&a.data), path_str(&a.model)],
        outputs: vec![out],
    })
}

fn calibrate(a: &CalibrateArgs) -> Result<Report, CliError> {
    let split = parse_split(&a.split)?;
    if a.bins == 0 {
        return Err(EvalError::Bins.into());
    }
    if let Some(alpha) = a.ensemble_alpha {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(EvalError::Alpha(alpha).into());
        }
    }
    let (data, engine) = load_corpus(&a.data)?;
    let data = select_split(&data, split);
    let model = ToyGroundedModel::load(&a.model)?;
    let preds = match a.ensemble_alpha {
        Some(alpha) => ensemble_predictions(&model, &engine, &data, &ALL_CATEGORIES, alpha, a.transform_seed)?,
        None => clean_predictions(&model, &data),
    };
    let report = reliability(&correctness(&preds), a.bins)?;
    create_out(&a.out)?;
    let out = write(&a.out, "calibration.json", &report.to_json())?;
    Ok(Report {
        command: "calibrate",
        config: json!({"bins": a.bins, "ensemble_alpha": a.ensemble_alpha, "split": a.split}),
        seeds: vec![a.transform_seed],
        inputs: vec![path_str(&a.data), path_str(&a.model)],
        outputs: vec![out],
    })
}

fn prepare(d: &SweepData) -> Result<(Prepared, Vec<String>), CliError> {
    match &d.data {
        Some(dir) => {
            let (data, engine) = load_corpus(dir)?;
            Ok((Prepared::from_dataset(&data, engine), vec![path_str(dir)]))
        }
        None => {
            let config = SynthConfig {
                n: d.n,
                seed: d.synth_seed,
                ..SynthConfig::default()
            };
            Ok((Prepared::synthetic(&config)?, Vec::new()))
        }
    }
}

fn sweep_config(opts: &TrainOpts, d: &SweepData, variants: &[Variant], grid: &[f64]) -> Result<(SdroConfig, Value), CliError> {
    let base = opts.config(Variant::Base, 0)?;
    let mut cfg = train_config_json(&base);
    cfg["variants"] = json!(variants.iter().map(|v| v.as_str()).collect::<Vec<_>>());
    cfg["grid"] = json!(grid);
    if d.data.is_none() {
        cfg["synthetic"] = json!({"n": d.n, "seed": d.synth_seed});
    }
    Ok((base, cfg))
}

fn sweep_t_cmd(a: &SweepTArgs) -> Result<Report, CliError> {
    let grid = percent_grid(&a.grid)?;
    let variants = a.variants.iter().map(|v| parse_variant(v)).collect::<Result<Vec<_>, _>>()?;
    let (base, cfg) = sweep_config(&a.opts, &a.data, &variants, &a.grid)?;
    let seeds: Vec<u64> = (0..a.data.seeds).collect();
    let (prepared, inputs) = prepare(&a.data)?;
    let results = sweep_t(&prepared, &base, &variants, &grid, &seeds)?;
    let mut csv = format!("{SWEEP_T_HEADER}\n");
    for r in &results {
        csv.push_str(&sweep_t_row(r));
        csv.push('\n');
    }
    create_out(&a.out)?;
    let out = write(&a.out, "sweep_t.csv", &csv)?;
    Ok(Report {
        command: "sweep-t",
        config: cfg,
        seeds,
        inputs,
        outputs: vec![out],
    })
}

fn sweep_size_cmd(a: &SweepSizeArgs) -> Result<Report, CliError> {
    let grid = percent_grid(&a.grid)?;
    if grid.contains(&0.0) {
        return Err(CliError::Usage("size grid values must be positive".into()));
    }
    let variants = a.variants.iter().map(|v| parse_variant(v)).collect::<Result<Vec<_>, _>>()?;
    let (base, cfg) = sweep_config(&a.opts, &a.data, &variants, &a.grid)?;
    let seeds: Vec<u64> = (0..a.data.seeds).collect();
    let (prepared, inputs) = prepare(&a.data)?;
    let results = sweep_size(&prepared, &base, &variants, &grid, &seeds)?;
    let mut csv = format!("{SWEEP_SIZE_HEADER}\n");
    for r in &results {
        csv.push_str(&sweep_size_row(r));
        csv.push('\n');
    }
    let mut auc = format!("{SIZE_AUC_HEADER}\n");
    for s in size_auc(&results, &variants) {
        auc.push_str(&s.csv_row());
        auc.push('\n');
    }
    create_out(&a.out)?;
    let outputs = vec![write(&a.out, "sweep_size.csv", &csv)?, write(&a.out, "size_auc.csv", &auc)?];
    Ok(Report {
        command: "sweep-size",
        config: cfg,
        seeds,
        inputs,
        outputs,
    })
}

fn out_dir(cmd: &Command) -> &Path {
    match cmd {
        Command::GenSynth(a) => &a.out,
        Command::Transform(a) => &a.out,
        Command::Train(a) => &a.out,
        Command::Eval(a) | Command::BiasEval(a) => &a.out,
        Command::Ensemble(a) => &a.out,
        Command::Calibrate(a) => &a.out,
        Command::SweepT(a) => &a.out,
        Command::SweepSize(a) => &a.out,
    }
}

/// Runs one command; returns the outcome instead of printing or exiting.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let report = match &cli.command {
        Command::GenSynth(a) => gen_synth(a),
        Command::Transform(a) => transform(a),
        Command::Train(a) => train(a),
        Command::Eval(a) => eval(a),
        Command::BiasEval(a) => bias_eval(a),
        Command::Ensemble(a) => ensemble(a),
        Command::Calibrate(a) => calibrate(a),
        Command::SweepT(a) => sweep_t_cmd(a),
        Command::SweepSize(a) => sweep_size_cmd(a),
    }?;
    write_manifest(out_dir(&cli.command), report, started)
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let (CliError::Usage(_), Command::Train(_)) = (&e, &cli.command) {
                eprintln!("usage: sdro train --data <DIR> --out <DIR> [--variant base|dataaug|sw|gw] [--t T]");
            }
            e.exit_code()
        }
    }
}
