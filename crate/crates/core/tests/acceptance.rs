//! End-to-end acceptance checks, one printed PASS/FAIL line per criterion.
//! Runs without the libtest harness so the lines are always visible; the
//! process exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdro::corpus::{parse_conllu, Label};
use sdro::evalsuite::{confidence, ensemble_predict, reliability};
use sdro::experiments::{averaged_curve, run, spearman, sweep_t, Prepared, RunResult};
use sdro::lexicon::Lexicon;
use sdro::model::{Dims, ToyGroundedModel};
use sdro::sdro::{
    run_training, select_group_wise, select_sample_wise, training_vocab, LossTable, SdroConfig, TransformCache,
    Variant,
};
use sdro::synthtask::{generate_dataset, oracle_label, SynthConfig};
use sdro::transforms::{Category, Engine, ParaphraseTable, Polarity, Source, ALL_CATEGORIES};

/// 2000 training samples after the default 10% validation and test splits.
const E2E_N: usize = 2500;
const E2E_SYNTH_SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, budget_secs: u64) -> (bool, String) {
    (
        elapsed <= Duration::from_secs(budget_secs),
        format!("{:.2}s (budget {budget_secs}s)", elapsed.as_secs_f64()),
    )
}

// 1 -------------------------------------------------------------------------

fn golden_transforms() -> Outcome {
    let start = Instant::now();
    let engine = Engine::new(Lexicon::builtin().unwrap()).with_paraphrases(
        ParaphraseTable::parse(
            include_str!("../resources/table1_paraphrases.tsv"),
            include_str!("../resources/table1_paraphrases.conllu"),
        )
        .unwrap(),
    );
    let sentences: HashMap<String, _> = parse_conllu(include_str!("../resources/table1.conllu"))
        .unwrap()
        .into_iter()
        .map(|s| (s.id.clone(), s))
        .collect();
    let strip = |s: &str| s.strip_suffix('.').unwrap_or(s).to_owned();
    let (mut ok, mut total) = (0, 0);
    let mut seen = Vec::new();
    for line in include_str!("../resources/table1_expected.tsv").lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        let category = Category::parse(cols[1]).unwrap();
        seen.push(category);
        let src = Source::new(cols[0], &sentences[cols[0]], Label::True);
        total += 1;
        let expected_label = match category.polarity() {
            Polarity::SP => Label::True,
            Polarity::SI => Label::False,
        };
        match engine.apply(category, &src, 0) {
            Some(t) if strip(&t.text) == strip(cols[2]) && t.label == expected_label => ok += 1,
            other => eprintln!("  golden mismatch {}: {:?}", cols[1], other.map(|t| t.text)),
        }
    }
    seen.sort();
    seen.dedup();
    let (fast, time) = within(start.elapsed(), 1);
    outcome(
        ok == total && seen.len() == 13 && fast,
        format!("{ok}/{total} rows exact, {} categories, {time}", seen.len()),
    )
}

// 2 -------------------------------------------------------------------------

fn random_table(rng: &mut ChaCha8Rng, rows: usize) -> Vec<Vec<Option<f64>>> {
    (0..rows)
        .map(|_| {
            (0..13)
                .map(|_| {
                    // Coarse values so ties occur.
                    (!rng.gen_bool(0.1)).then(|| f64::from(rng.gen_range(0u32..40)) / 8.0)
                })
                .collect()
        })
        .collect()
}

fn brute_row_argmax(rows: &[Vec<Option<f64>>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let present: Vec<(usize, f64)> = row.iter().enumerate().filter_map(|(c, v)| v.map(|v| (c, v))).collect();
        if let Some(max) = present.iter().map(|p| p.1).reduce(f64::max) {
            let first = present.iter().find(|p| p.1 == max).unwrap().0;
            out.push((r, first));
        }
    }
    out
}

fn brute_column_top_k(rows: &[Vec<Option<f64>>]) -> Vec<(usize, usize)> {
    let k = rows.len() / 13;
    let mut out = Vec::new();
    for c in 0..13 {
        let mut entries: Vec<(usize, f64)> = rows.iter().enumerate().filter_map(|(r, row)| row[c].map(|v| (r, v))).collect();
        // Stable sort keeps earlier rows first among equal losses.
        entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        out.extend(entries.into_iter().take(k).map(|(r, _)| (r, c)));
    }
    out.sort_unstable();
    out
}

fn selector_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut sw_ok, mut gw_ok) = (0, 0);
    for _ in 0..100 {
        let rows = random_table(&mut rng, 50);
        let table = LossTable::new(50, ALL_CATEGORIES.to_vec(), rows.concat());
        let got: Vec<(usize, usize)> = select_sample_wise(&table).chosen.iter().map(|c| (c.row, c.col)).collect();
        sw_ok += usize::from(got == brute_row_argmax(&rows));
        let rows = random_table(&mut rng, 50);
        let table = LossTable::new(50, ALL_CATEGORIES.to_vec(), rows.concat());
        let got: Vec<(usize, usize)> = select_group_wise(&table).chosen.iter().map(|c| (c.row, c.col)).collect();
        gw_ok += usize::from(got == brute_column_top_k(&rows));
    }
    let (fast, time) = within(start.elapsed(), 5);
    outcome(sw_ok == 100 && gw_ok == 100 && fast, format!("SW {sw_ok}/100, GW {gw_ok}/100 exact, {time}"))
}

// 3 and 4 -------------------------------------------------------------------

fn twenty_epoch_runs() -> (Outcome, Outcome) {
    let corpus = generate_dataset(&SynthConfig {
        n: 500,
        seed: 3,
        ..SynthConfig::default()
    });
    let engine = Engine::new(Lexicon::builtin().unwrap()).with_paraphrases(corpus.paraphrases.clone());
    let data = corpus.dataset.split(sdro::corpus::Split::Train);
    let mut size_ok = true;
    let mut sizes = Vec::new();
    let mut balance_ok = true;
    let mut max_ratio = String::new();
    for variant in [Variant::SampleWise, Variant::GroupWise] {
        let config = SdroConfig {
            variant,
            epochs: 20,
            ..SdroConfig::default()
        };
        let out = run_training(&config, &engine, &data).unwrap();
        size_ok &= out.epochs.len() == 20 && out.epochs.iter().all(|e| e.augmented_size == data.len());
        sizes.push(format!("{variant}: 20 epochs of {}", data.len()));
        if variant == Variant::GroupWise {
            // Recount selections from the trace rather than trusting per_group.
            for e in out.epochs.iter().filter(|e| !e.subset.is_empty()) {
                let mut per: HashMap<Category, usize> = HashMap::new();
                for r in out.trace.iter().filter(|r| r.epoch == e.epoch && r.selected) {
                    *per.entry(r.group).or_default() += 1;
                }
                let k = e.subset.len() / ALL_CATEGORIES.len();
                let worst = per.values().copied().max().unwrap_or(0);
                balance_ok &= worst <= k;
                max_ratio = format!("max per-group {worst} ≤ k = {k}");
            }
        }
    }
    (
        outcome(size_ok, format!("|D_aug| = |D| every epoch ({})", sizes.join(", "))),
        outcome(balance_ok, format!("every GW epoch within k, last epoch {max_ratio}")),
    )
}

// 5 -------------------------------------------------------------------------

fn gradient_check() -> Outcome {
    let start = Instant::now();
    let corpus = generate_dataset(&SynthConfig {
        n: 100,
        seed: 8,
        ..SynthConfig::default()
    });
    let data = &corpus.dataset;
    let engine = Engine::new(Lexicon::builtin().unwrap()).with_paraphrases(corpus.paraphrases.clone());
    let cache = TransformCache::build(&engine, data, &ALL_CATEGORIES, false, 0);
    let vocab = training_vocab(data, &cache);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst: f64 = 0.0;
    for pair in 0..20u64 {
        let dims = Dims {
            embed: rng.gen_range(4..16),
            hidden: rng.gen_range(4..16),
            context: data.context_dim(),
        };
        let mut model = ToyGroundedModel::init(vocab.clone(), dims, pair);
        let s = &data.samples()[rng.gen_range(0..data.len())];
        let tokens = data.sentence_of(s).surfaces();
        let ctx = data.context_of(s).as_slice();
        // A few steps so the check is not only at initialization.
        let warm: Vec<_> = data.samples()[..16]
            .iter()
            .map(|t| model.example(&data.sentence_of(t).surfaces(), data.context_of(t).as_slice(), t.label))
            .collect();
        for _ in 0..pair % 4 {
            model.train_step(&warm, 0.05);
        }
        let ex = model.example(&tokens, ctx, s.label);
        worst = worst.max(model.grad_check_sampled(&ex, 1e-5, 400));
    }
    let (fast, time) = within(start.elapsed(), 10);
    outcome(worst < 1e-4 && fast, format!("max relative error {worst:.2e} < 1e-4 over 20 pairs, {time}"))
}

// 6 -------------------------------------------------------------------------

/// ECE computed by grouping predictions on the integer bin ceil(c·M) with
/// exact rational comparison, independent of the library binning.
fn ece_reference(preds: &[(f64, bool)], m: usize) -> f64 {
    let mut bins: Vec<(f64, f64, f64)> = vec![(0.0, 0.0, 0.0); m];
    for &(p, ok) in preds {
        let c = confidence(p);
        let mut b = 1;
        while (b as f64) < c * m as f64 && b < m {
            b += 1;
        }
        // c·M can round up across an edge; confirm with division.
        while b > 1 && c <= (b - 1) as f64 / m as f64 {
            b -= 1;
        }
        let e = &mut bins[b - 1];
        e.0 += 1.0;
        e.1 += c;
        e.2 += if ok { 1.0 } else { 0.0 };
    }
    let n = preds.len() as f64;
    bins.iter().filter(|b| b.0 > 0.0).map(|b| b.0 / n * (b.2 / b.0 - b.1 / b.0).abs()).sum()
}

fn calibration_math() -> Outcome {
    let mut stream = Vec::new();
    for (p, n, correct) in [(1.0, 7, 7), (0.75, 8, 6), (0.625, 8, 5), (0.0, 3, 3), (0.125, 16, 14)] {
        for i in 0..n {
            stream.push((p, i < correct));
        }
    }
    let perfect = reliability(&stream, 20).unwrap().ece;
    let two = reliability(&[(0.9, true), (0.9, false)], 20).unwrap().ece;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let preds: Vec<(f64, bool)> = (0..10_000).map(|_| (rng.gen::<f64>(), rng.gen::<bool>())).collect();
    let lib = reliability(&preds, 20).unwrap().ece;
    let reference = ece_reference(&preds, 20);
    let diff = (lib - reference).abs();
    outcome(
        perfect.abs() <= 1e-12 && two == 0.4 && diff <= 1e-12,
        format!("calibrated ECE {perfect:.1e}, two-point {two}, dual-implementation gap {diff:.1e}"),
    )
}

// 7 -------------------------------------------------------------------------

fn ensembling() -> Outcome {
    let identity = [0.0, 0.13, 0.5, 0.97, 1.0].iter().all(|&f| ensemble_predict(f, &[0.2, 0.9], &[0.4], 1.0) == f);
    let fixed = ensemble_predict(0.8, &[0.8, 0.8], &[0.2, 0.2], 0.5) == 0.8;
    let arith = ensemble_predict(0.6, &[0.7, 0.5], &[0.3], 0.5);
    outcome(
        identity && fixed && (arith - 0.625).abs() <= 1e-12,
        format!("alpha=1 identity {identity}, fixed point {fixed}, example {arith}"),
    )
}

// 8 -------------------------------------------------------------------------

fn oracle_consistency() -> Outcome {
    let corpus = generate_dataset(&SynthConfig {
        n: 1000,
        seed: 3,
        ..SynthConfig::default()
    });
    let engine = Engine::new(Lexicon::builtin().unwrap()).with_paraphrases(corpus.paraphrases.clone());
    let ds = &corpus.dataset;
    let mut per: HashMap<Category, (usize, usize)> = HashMap::new();
    for s in ds.samples() {
        let src = Source::new(&s.id, ds.sentence_of(s), s.label);
        let scene = corpus.scene_of(s).unwrap();
        for t in engine.apply_all(&src, &[Category::Negation, Category::NumberSi, Category::SubjectObjectSwap], 0) {
            let e = per.entry(t.category()).or_default();
            e.1 += 1;
            if oracle_label(scene, &t.tokens) == Ok(t.label) {
                e.0 += 1;
            }
        }
    }
    let (agree, total) = per.values().fold((0, 0), |a, v| (a.0 + v.0, a.1 + v.1));
    let rate = agree as f64 / total as f64;
    let mut parts: Vec<String> = per.iter().map(|(c, (a, t))| format!("{c} {a}/{t}")).collect();
    parts.sort();
    outcome(
        rate >= 0.95 && per.len() == 3,
        format!("{agree}/{total} = {:.2}% agree ({})", 100.0 * rate, parts.join(", ")),
    )
}

// 9 -------------------------------------------------------------------------

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = v.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let prepared = Prepared::synthetic(&SynthConfig {
        n: E2E_N,
        seed: E2E_SYNTH_SEED,
        ..SynthConfig::default()
    })
    .unwrap();
    assert_eq!(prepared.train.len(), 2000);
    let variants = [Variant::Base, Variant::DataAug, Variant::SampleWise, Variant::GroupWise];
    let mut results: HashMap<Variant, Vec<RunResult>> = HashMap::new();
    for &variant in &variants {
        for seed in 0..5 {
            let config = SdroConfig {
                variant,
                t: 0.2,
                epochs: 10,
                seed,
                ..SdroConfig::default()
            };
            results.entry(variant).or_default().push(run(&prepared, &config, 1.0).unwrap().1);
        }
    }
    let avg = |v: Variant, f: fn(&RunResult) -> f64| mean(results[&v].iter().map(f));
    let base_clean = avg(Variant::Base, RunResult::clean);
    let base_si = avg(Variant::Base, RunResult::si);
    let mut pass = true;
    let mut parts = Vec::new();
    for v in variants {
        parts.push(format!(
            "{v} clean {:.3} SP {:.3} SI {:.3}",
            avg(v, RunResult::clean),
            avg(v, RunResult::sp),
            avg(v, RunResult::si)
        ));
    }
    for v in [Variant::SampleWise, Variant::GroupWise] {
        let si_gain = 100.0 * (avg(v, RunResult::si) - base_si);
        let clean_drop = 100.0 * (base_clean - avg(v, RunResult::clean));
        let a = si_gain >= 10.0;
        let b = clean_drop <= 1.0;
        pass &= a && b;
        parts.push(format!(
            "{v}: (a) SI +{si_gain:.1} pts [{}], (b) clean -{clean_drop:.1} pts [{}]",
            if a { "ok" } else { "short" },
            if b { "ok" } else { "short" }
        ));
    }
    // (c) reported only: naive augmentation's clean accuracy against its
    // own robust (SISP) accuracy.
    parts.push(format!(
        "(c) dataaug clean {:.3} vs SISP {:.3}",
        avg(Variant::DataAug, RunResult::clean),
        avg(Variant::DataAug, RunResult::sisp)
    ));
    let (fast, time) = within(start.elapsed(), 300);
    parts.push(time);
    outcome(pass && fast, parts.join("; "))
}

// 10 ------------------------------------------------------------------------

fn t_sweep() -> Outcome {
    let start = Instant::now();
    let prepared = Prepared::synthetic(&SynthConfig {
        n: E2E_N,
        seed: E2E_SYNTH_SEED,
        ..SynthConfig::default()
    })
    .unwrap();
    let grid = [0.1, 0.2, 0.3, 0.4, 0.6, 0.8];
    let variants = [Variant::DataAug, Variant::SampleWise, Variant::GroupWise];
    let results = sweep_t(&prepared, &SdroConfig::default(), &variants, &grid, &[0, 1, 2]).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for v in variants {
        let curve = averaged_curve(&results, v, |r| r.t, RunResult::sisp);
        let (ts, accs): (Vec<f64>, Vec<f64>) = curve.iter().copied().unzip();
        let rho = spearman(&ts, &accs);
        pass &= rho.is_some_and(|r| r > 0.0);
        let accs: Vec<String> = accs.iter().map(|a| format!("{a:.3}")).collect();
        parts.push(format!("{v} rho {} [{}]", rho.map_or("undefined".into(), |r| format!("{r:.2}")), accs.join(" ")));
    }
    let (fast, time) = within(start.elapsed(), 1200);
    parts.push(time);
    outcome(pass && fast, parts.join("; "))
}

// 11 ------------------------------------------------------------------------

fn size_sweep() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("size");
    let n = E2E_N.to_string();
    let code = sdro::cli::run([
        "sdro",
        "sweep-size",
        "--grid",
        "10,20,40,80,100",
        "--seeds",
        "2",
        "--variants",
        "base,gw",
        "--n",
        &n,
        "--out",
        out.to_str().unwrap(),
    ]);
    if code != 0 {
        return outcome(false, format!("sweep-size exited with {code}"));
    }
    let rows = std::fs::read_to_string(out.join("sweep_size.csv")).unwrap();
    let auc = std::fs::read_to_string(out.join("size_auc.csv")).unwrap();
    let well_formed = |text: &str, header: &str, cols: usize, expected_rows: usize| {
        let lines: Vec<&str> = text.lines().collect();
        lines.first() == Some(&header)
            && lines.len() == expected_rows + 1
            && lines[1..].iter().all(|l| l.split(',').count() == cols)
    };
    let rows_ok = well_formed(&rows, "variant,data_frac,seed,clean,sp,si,sisp", 7, 20)
        && rows.lines().skip(1).all(|l| l.split(',').skip(3).all(|v| v.parse::<f64>().is_ok_and(|x| (0.0..=1.0).contains(&x))));
    let auc_ok = well_formed(&auc, "variant,clean_auc,sisp_auc,clean_monotone,sisp_monotone", 5, 2);
    let summary: Vec<String> = auc.lines().skip(1).map(str::to_owned).collect();
    outcome(
        rows_ok && auc_ok && out.join("manifest.json").exists(),
        format!("20 rows + AUC table well-formed; monotonicity (reported): {}", summary.join(" | ")),
    )
}

type Check = Box<dyn Fn() -> Vec<Outcome>>;

fn main() {
    let criteria: Vec<(u32, &str, Check)> = vec![
        (1, "golden transforms", Box::new(|| vec![golden_transforms()])),
        (2, "selector oracles", Box::new(|| vec![selector_oracles()])),
        (3, "size preservation / 4 GW balance", Box::new(|| {
            let (a, b) = twenty_epoch_runs();
            vec![a, b]
        })),
        (5, "gradient check", Box::new(|| vec![gradient_check()])),
        (6, "calibration math", Box::new(|| vec![calibration_math()])),
        (7, "ensembling", Box::new(|| vec![ensembling()])),
        (8, "oracle consistency of SI labels", Box::new(|| vec![oracle_consistency()])),
        (9, "end-to-end directional result", Box::new(|| vec![end_to_end()])),
        (10, "T-sweep trend", Box::new(|| vec![t_sweep()])),
        (11, "size sweep harness", Box::new(|| vec![size_sweep()])),
    ];
    let names = HashMap::from([(3, "size preservation"), (4, "GW balance")]);
    let mut failed = Vec::new();
    for (id, name, check) in &criteria {
        let results = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                vec![outcome(false, format!("panicked: {msg}"))]
            }
        };
        for (i, r) in results.iter().enumerate() {
            let n = id + i as u32;
            let label = names.get(&n).copied().unwrap_or(name);
            let status = if r.pass { "PASS" } else { "FAIL" };
            println!("criterion {n:>2} {status}  {label}: {}", r.detail);
            if !r.pass {
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
