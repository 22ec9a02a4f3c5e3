use std::path::Path;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::templates::{Statement, StatementKind};
use super::{encode_scene, generate_scene, oracle_label, Posture, Scene, COLORS};
use crate::corpus::{CorpusError, Dataset, Label, Sample, Split};
use crate::transforms::ParaphraseTable;

pub const SCENES_FILE: &str = "scenes.json";

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub n: usize,
    pub seed: u64,
    pub val_frac: f64,
    pub test_frac: f64,
    /// Probability that a statement uses its negated template.
    pub negated_frac: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n: 2000,
            seed: 1,
            val_frac: 0.1,
            test_frac: 0.1,
            negated_frac: 0.2,
        }
    }
}

/// A generated dataset with the scenes behind its contexts and a paraphrase
/// for every statement.
#[derive(Clone, Debug)]
pub struct SynthCorpus {
    pub dataset: Dataset,
    pub scenes: IndexMap<String, Scene>,
    pub paraphrases: ParaphraseTable,
}

impl SynthCorpus {
    pub fn scene_of(&self, sample: &Sample) -> Option<&Scene> {
        self.scenes.get(&sample.context_id)
    }

    pub fn scenes_json(&self) -> String {
        let v: Vec<serde_json::Value> = self.scenes.values().map(Scene::to_json_value).collect();
        serde_json::to_string_pretty(&v).expect("scenes serialize")
    }

    pub fn parse_scenes(text: &str) -> Result<IndexMap<String, Scene>, CorpusError> {
        let values: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| CorpusError::BadRecord {
            line: e.line(),
            message: e.to_string(),
        })?;
        let mut out = IndexMap::new();
        for (i, v) in values.into_iter().enumerate() {
            let scene = Scene::from_json_value(v).map_err(|message| CorpusError::BadRecord { line: i + 1, message })?;
            out.insert(scene.id.clone(), scene);
        }
        Ok(out)
    }

    pub fn write_dir(&self, dir: &Path) -> Result<(), CorpusError> {
        self.dataset.write_dir(dir)?;
        crate::corpus::write_file(&dir.join(SCENES_FILE), &self.scenes_json())?;
        self.paraphrases.write_dir(dir)
    }

    pub fn load_dir(dir: &Path) -> Result<SynthCorpus, CorpusError> {
        let dataset = Dataset::load_dir(dir)?;
        let scenes = Self::parse_scenes(&crate::corpus::read_file(&dir.join(SCENES_FILE))?)?;
        let paraphrases = ParaphraseTable::load_dir_if_present(dir)?;
        Ok(SynthCorpus {
            dataset,
            scenes,
            paraphrases,
        })
    }
}

fn other_color<R: Rng>(rng: &mut R, not: usize) -> usize {
    let c = rng.gen_range(0..COLORS.len() - 1);
    if c >= not {
        c + 1
    } else {
        c
    }
}

/// A statement about `scene` whose truth is `label`, if the chosen family
/// fits the scene.
fn make_statement<R: Rng>(scene: &Scene, family: usize, negated: bool, label: bool, rng: &mut R) -> Option<Statement> {
    let kind = match family {
        0 => {
            let o = scene.objects.choose(rng)?;
            let c = scene.count(o.kind, o.color) as u32;
            let n = if label != negated { c } else { c + 1 };
            StatementKind::Count { kind: o.kind, color: o.color, n }
        }
        1 => {
            let unique: Vec<_> = scene.objects.iter().filter(|o| scene.count_kind(o.kind) == 1).collect();
            let o = unique.choose(rng)?;
            let color = if label != negated { o.color } else { other_color(rng, o.color) };
            StatementKind::Property { kind: o.kind, color }
        }
        _ => {
            let action = family == 3;
            let mut pairs = Vec::new();
            for a in &scene.objects {
                for b in &scene.objects {
                    if a.x < b.x
                        && a.kind != b.kind
                        && scene.count_kind(a.kind) == 1
                        && scene.count_kind(b.kind) == 1
                        && (!action || Posture::of(a.kind) == Posture::of(b.kind))
                    {
                        pairs.push((a.kind, b.kind));
                    }
                }
            }
            let &(left, right) = pairs.choose(rng)?;
            let (a, b) = if label != negated { (left, right) } else { (right, left) };
            if action {
                StatementKind::Action {
                    a,
                    b,
                    posture: Posture::of(a),
                }
            } else {
                StatementKind::Relation { a, b }
            }
        }
    };
    Some(Statement { kind, negated })
}

/// Generates `config.n` labeled statements over fresh scenes. Labels are an
/// exact shuffled half/half split; every label agrees with the oracle.
pub fn generate_dataset(config: &SynthConfig) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n;
    let mut labels: Vec<bool> = (0..n).map(|i| i < n / 2).collect();
    labels.shuffle(&mut rng);
    let n_val = (config.val_frac * n as f64).round() as usize;
    let n_test = ((config.test_frac * n as f64).round() as usize).min(n - n_val.min(n));
    let n_train = n - n_val.min(n) - n_test;

    let mut dataset = Dataset::new();
    let mut scenes = IndexMap::new();
    let mut paraphrases = ParaphraseTable::new();
    for (i, &label) in labels.iter().enumerate() {
        let scene_id = format!("scene-{i:05}");
        let (scene, statement) = loop {
            let scene = generate_scene(&mut rng, &scene_id);
            let family = rng.gen_range(0..4);
            let negated = rng.gen_bool(config.negated_frac);
            if let Some(s) = make_statement(&scene, family, negated, label, &mut rng) {
                break (scene, s);
            }
        };
        let sentence_id = format!("sent-{i:05}");
        let sentence = statement.render(&sentence_id, false);
        debug_assert_eq!(oracle_label(&scene, &sentence.surfaces()), Ok(Label::from_bool(label)));
        paraphrases.insert(&sentence_id, statement.render(&sentence_id, true));
        let split = if i < n_train {
            Split::Train
        } else if i < n_train + n_val {
            Split::Val
        } else {
            Split::Test
        };
        dataset.add_sentence(sentence).expect("fresh sentence id");
        dataset
            .add_context(&scene_id, encode_scene(&scene))
            .expect("fresh scene id");
        dataset
            .push_sample(Sample {
                id: format!("syn-{i:05}"),
                sentence_id,
                label: Label::from_bool(label),
                context_id: scene_id.clone(),
                split,
            })
            .expect("references resolve");
        scenes.insert(scene_id, scene);
    }
    SynthCorpus {
        dataset,
        scenes,
        paraphrases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_and_oracle_consistent() {
        let corpus = generate_dataset(&SynthConfig {
            n: 2000,
            seed: 1,
            ..SynthConfig::default()
        });
        let ds = &corpus.dataset;
        assert_eq!(ds.len(), 2000);
        let trues = ds.samples().iter().filter(|s| s.label == Label::True).count();
        assert!((trues as i64 - 1000).abs() <= 40);
        for s in ds.samples() {
            let scene = corpus.scene_of(s).unwrap();
            assert_eq!(oracle_label(scene, &ds.sentence_of(s).surfaces()), Ok(s.label));
            let para = corpus.paraphrases.get(&s.sentence_id).unwrap();
            assert_eq!(oracle_label(scene, &para.surfaces()), Ok(s.label), "{}", para.text());
        }
        assert_eq!(ds.split(Split::Train).len(), 1600);
        assert_eq!(ds.split(Split::Test).len(), 200);
    }

    #[test]
    fn empty_and_deterministic() {
        let cfg = SynthConfig { n: 0, ..SynthConfig::default() };
        assert!(generate_dataset(&cfg).dataset.is_empty());
        let cfg = SynthConfig { n: 50, seed: 9, ..SynthConfig::default() };
        assert_eq!(generate_dataset(&cfg).dataset, generate_dataset(&cfg).dataset);
    }

    #[test]
    fn files_roundtrip() {
        let corpus = generate_dataset(&SynthConfig { n: 30, seed: 2, ..SynthConfig::default() });
        let dir = tempfile::tempdir().unwrap();
        corpus.write_dir(dir.path()).unwrap();
        let back = SynthCorpus::load_dir(dir.path()).unwrap();
        assert_eq!(back.dataset, corpus.dataset);
        assert_eq!(back.scenes, corpus.scenes);
        assert_eq!(back.paraphrases.len(), 30);
    }
}
