//! A small synthetic grounded-statement task: scenes of colored objects on
//! a line, templated statements about them, and an exact truth oracle.

mod generate;
mod oracle;
mod templates;

pub use generate::{generate_dataset, SynthConfig, SynthCorpus, SCENES_FILE};
pub use oracle::{oracle_label, Unevaluable};
pub use templates::{Statement, StatementKind};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::ContextVector;

pub const TYPES: [&str; 8] = ["cube", "sphere", "cylinder", "cone", "pyramid", "ring", "man", "woman"];
pub const TYPE_PLURALS: [&str; 8] = ["cubes", "spheres", "cylinders", "cones", "pyramids", "rings", "men", "women"];
pub const COLORS: [&str; 6] = ["red", "blue", "green", "yellow", "purple", "gray"];
pub const POSITIONS: u32 = 8;
pub const MAX_OBJECTS: usize = 5;

/// Length of [`encode_scene`]'s output.
pub const CONTEXT_DIM: usize = TYPES.len() + COLORS.len() + TYPES.len() * COLORS.len() + TYPES.len() * TYPES.len();

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Posture {
    Sits,
    Stands,
}

impl Posture {
    pub fn of(kind: usize) -> Posture {
        match TYPES[kind] {
            "cube" | "sphere" | "pyramid" | "ring" => Posture::Sits,
            _ => Posture::Stands,
        }
    }

    pub fn lemma(self) -> &'static str {
        match self {
            Posture::Sits => "sit",
            Posture::Stands => "stand",
        }
    }

    pub fn third_singular(self) -> &'static str {
        match self {
            Posture::Sits => "sits",
            Posture::Stands => "stands",
        }
    }
}

pub fn type_index(word: &str) -> Option<usize> {
    TYPES
        .iter()
        .position(|t| *t == word)
        .or_else(|| TYPE_PLURALS.iter().position(|t| *t == word))
}

pub fn color_index(word: &str) -> Option<usize> {
    match word {
        "grey" => Some(5),
        w => COLORS.iter().position(|c| *c == w),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneObject {
    pub kind: usize,
    pub color: usize,
    pub x: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    pub id: String,
    pub objects: Vec<SceneObject>,
}

#[derive(Serialize, Deserialize)]
struct ObjectRecord {
    #[serde(rename = "type")]
    kind: String,
    color: String,
    x: u32,
}

#[derive(Serialize, Deserialize)]
struct SceneRecord {
    id: String,
    objects: Vec<ObjectRecord>,
}

impl Scene {
    pub fn count(&self, kind: usize, color: usize) -> usize {
        self.objects.iter().filter(|o| o.kind == kind && o.color == color).count()
    }

    pub fn count_kind(&self, kind: usize) -> usize {
        self.objects.iter().filter(|o| o.kind == kind).count()
    }

    /// The only object of `kind`, if exactly one exists.
    pub fn unique(&self, kind: usize) -> Option<&SceneObject> {
        let mut it = self.objects.iter().filter(|o| o.kind == kind);
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let rec = SceneRecord {
            id: self.id.clone(),
            objects: self
                .objects
                .iter()
                .map(|o| ObjectRecord {
                    kind: TYPES[o.kind].to_owned(),
                    color: COLORS[o.color].to_owned(),
                    x: o.x,
                })
                .collect(),
        };
        serde_json::to_value(rec).expect("scene serializes")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Scene, String> {
        let rec: SceneRecord = serde_json::from_value(v).map_err(|e| e.to_string())?;
        let objects = rec
            .objects
            .into_iter()
            .map(|o| {
                Ok(SceneObject {
                    kind: type_index(&o.kind).ok_or_else(|| format!("unknown type `{}`", o.kind))?,
                    color: color_index(&o.color).ok_or_else(|| format!("unknown color `{}`", o.color))?,
                    x: o.x,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Scene { id: rec.id, objects })
    }
}

pub fn generate_scene<R: Rng>(rng: &mut R, id: &str) -> Scene {
    let n = rng.gen_range(1..=MAX_OBJECTS);
    let mut xs: Vec<u32> = (0..POSITIONS).collect();
    xs.shuffle(rng);
    let objects = xs[..n]
        .iter()
        .map(|&x| SceneObject {
            kind: rng.gen_range(0..TYPES.len()),
            color: rng.gen_range(0..COLORS.len()),
            x,
        })
        .collect();
    Scene {
        id: id.to_owned(),
        objects,
    }
}

/// Type counts, color counts, per-(type, color) counts, then one
/// indicator per ordered type pair (a, b) set when some a lies left of
/// some b.
pub fn encode_scene(scene: &Scene) -> ContextVector {
    let (nt, nc) = (TYPES.len(), COLORS.len());
    let mut v = vec![0.0; CONTEXT_DIM];
    for o in &scene.objects {
        v[o.kind] += 1.0;
        v[nt + o.color] += 1.0;
        v[nt + nc + o.kind * nc + o.color] += 1.0;
    }
    let base = nt + nc + nt * nc;
    for a in &scene.objects {
        for b in &scene.objects {
            if a.x < b.x {
                v[base + a.kind * nt + b.kind] = 1.0;
            }
        }
    }
    ContextVector(v)
}
