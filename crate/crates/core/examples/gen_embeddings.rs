//! Regenerates `resources/embeddings.50d.txt`, the small topical embedding
//! table shipped with the crate.
//!
//! Each word is a weighted sum of shared topic directions plus a private
//! direction, so words sharing a topic land close together (cosine ~0.7–0.9)
//! and unrelated words stay near-orthogonal. Colors share only a weak topic so
//! that no two distinct colors clear the 0.55 neighbor threshold.
//!
//!     cargo run -p sdro --example gen_embeddings > crates/core/resources/embeddings.50d.txt

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIM: usize = 50;
const PRIVATE: f64 = 0.45;

fn gaussian_unit(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..DIM)
        .map(|_| {
            // Box-Muller
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        })
        .collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    v
}

fn main() {
    let groups: &[(&str, f64, &[&str])] = &[
        ("visual", 1.0, &["image", "picture", "photo", "photograph", "illustration", "drawing"]),
        ("imgpic", 0.7, &["image", "picture"]),
        ("speech", 1.0, &["speak", "talk", "say", "chat", "converse", "whisper"]),
        ("spktlk", 0.6, &["speak", "talk"]),
        ("entry", 1.0, &["door", "gate", "entrance", "doorway", "window"]),
        ("person", 1.0, &["woman", "man", "girl", "boy", "lady", "guy", "person", "child", "kid", "people"]),
        ("fem", 0.5, &["woman", "girl", "lady"]),
        ("masc", 0.5, &["man", "boy", "guy"]),
        ("posture", 1.0, &["stand", "sit", "rest", "rise", "lie", "remain", "kneel"]),
        ("upright", 0.5, &["stand", "rise", "remain"]),
        ("seated", 0.5, &["sit", "rest", "kneel"]),
        ("size", 1.0, &["big", "large", "small", "little", "huge", "tiny", "bigger", "larger", "smaller"]),
        ("bigs", 0.5, &["big", "large", "huge", "bigger", "larger"]),
        ("smalls", 0.5, &["small", "little", "tiny", "smaller"]),
        ("shape", 0.5, &[
            "cube", "block", "box", "brick", "sphere", "ball", "orb", "globe", "cylinder", "tube", "pipe",
            "cone", "funnel", "horn", "pyramid", "prism", "tetrahedron", "ring", "hoop", "loop",
        ]),
        ("cubic", 1.0, &["cube", "block", "box", "brick"]),
        ("round", 1.0, &["sphere", "ball", "orb", "globe"]),
        ("tubular", 1.0, &["cylinder", "tube", "pipe"]),
        ("conic", 1.0, &["cone", "funnel", "horn"]),
        ("pyramidal", 1.0, &["pyramid", "prism", "tetrahedron"]),
        ("ringy", 1.0, &["ring", "hoop", "loop"]),
        ("color", 0.35, &["red", "blue", "green", "yellow", "purple", "gray", "grey", "white", "black", "orange"]),
        ("gry", 1.0, &["gray", "grey"]),
        ("way", 1.0, &["street", "road", "avenue", "lane"]),
        ("vessel", 1.0, &["bottle", "jar", "flask", "jug"]),
        ("drink", 1.0, &["beer", "wine", "ale"]),
        ("kitchen", 1.0, &["kitchen", "utensil", "spoon", "spatula", "bowl", "dish", "plate", "dough"]),
        ("tech", 1.0, &["monitor", "screen", "display", "computer"]),
        ("bird", 1.0, &["swan", "goose", "duck"]),
        ("water", 1.0, &["canal", "river", "waterway"]),
        ("house", 1.0, &["porch", "balcony", "veranda", "closet", "cabinet"]),
        ("clothes", 1.0, &["shirt", "jacket", "sweater"]),
        ("camera", 1.0, &["selfie", "camera", "snapshot"]),
        ("employ", 1.0, &["use", "utilize", "employ"]),
        ("steer", 1.0, &["drive", "steer", "ride"]),
        ("float", 1.0, &["swim", "paddle", "float"]),
        ("reveal", 1.0, &["show", "reveal", "present"]),
        ("afterlife", 1.0, &["heaven", "hell", "paradise"]),
        ("motion", 1.0, &["come", "arrive", "go", "leave"]),
        ("strike", 1.0, &["knock", "rap", "tap"]),
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(20210705);
    let mut topics: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut words: Vec<&str> = Vec::new();
    let mut mix: BTreeMap<&str, Vec<(&str, f64)>> = BTreeMap::new();
    for (topic, weight, members) in groups {
        topics.insert(topic, gaussian_unit(&mut rng));
        for w in *members {
            if !mix.contains_key(w) {
                words.push(w);
            }
            mix.entry(w).or_default().push((topic, *weight));
        }
    }
    for w in words {
        let mut v = gaussian_unit(&mut rng);
        v.iter_mut().for_each(|x| *x *= PRIVATE);
        for (topic, weight) in &mix[w] {
            for (x, t) in v.iter_mut().zip(&topics[topic]) {
                *x += weight * t;
            }
        }
        let vals: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
        println!("{w} {}", vals.join(" "));
    }
}
