//! A small grounded binary classifier with hand-written gradients.
//!
//! The mean of the token embeddings is concatenated with the context vector
//! and fed through one tanh hidden layer to a sigmoid output. Pooling makes
//! the text side order-blind.

mod checkpoint;
mod vocab;

pub use checkpoint::CheckpointError;
pub use vocab::{Vocab, UNK};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Label;

pub const DEFAULT_EMBED_DIM: usize = 32;
pub const DEFAULT_HIDDEN: usize = 64;
pub const DEFAULT_LR: f64 = 0.05;
pub const DEFAULT_BATCH_SIZE: usize = 32;
/// Probabilities are clamped to `[P_CLAMP, 1 − P_CLAMP]` inside the loss.
pub const P_CLAMP: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub embed: usize,
    pub hidden: usize,
    pub context: usize,
}

impl Dims {
    pub fn new(context: usize) -> Self {
        Dims {
            embed: DEFAULT_EMBED_DIM,
            hidden: DEFAULT_HIDDEN,
            context,
        }
    }

    pub fn input(&self) -> usize {
        self.embed + self.context
    }
}

/// One training or evaluation instance, already mapped to vocabulary ids.
#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub ids: Vec<usize>,
    pub context: Vec<f64>,
    pub label: Label,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Embedding,
    HiddenWeight,
    HiddenBias,
    OutputWeight,
    OutputBias,
}

pub const BLOCKS: [Block; 5] = [
    Block::Embedding,
    Block::HiddenWeight,
    Block::HiddenBias,
    Block::OutputWeight,
    Block::OutputBias,
];

#[derive(Clone, Debug, PartialEq)]
pub struct ToyGroundedModel {
    pub vocab: Vocab,
    pub dims: Dims,
    /// |V| × embed, row-major.
    pub embedding: Vec<f64>,
    /// hidden × input, row-major.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

/// Gradients with the model's parameter shapes.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    pub embedding: Vec<f64>,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl Gradients {
    fn zeros(m: &ToyGroundedModel) -> Self {
        Gradients {
            embedding: vec![0.0; m.embedding.len()],
            w1: vec![0.0; m.w1.len()],
            b1: vec![0.0; m.b1.len()],
            w2: vec![0.0; m.w2.len()],
            b2: 0.0,
        }
    }

    pub fn block(&self, block: Block) -> &[f64] {
        match block {
            Block::Embedding => &self.embedding,
            Block::HiddenWeight => &self.w1,
            Block::HiddenBias => &self.b1,
            Block::OutputWeight => &self.w2,
            Block::OutputBias => std::slice::from_ref(&self.b2),
        }
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Binary cross-entropy with the probability clamped to
/// `[P_CLAMP, 1 − P_CLAMP]`.
pub fn bce_loss(p: f64, label: Label) -> f64 {
    let p = p.clamp(P_CLAMP, 1.0 - P_CLAMP);
    if label.as_bool() {
        -p.ln()
    } else {
        -(1.0 - p).ln()
    }
}

fn uniform(rng: &mut ChaCha8Rng, len: usize, bound: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-bound..=bound)).collect()
}

struct Activations {
    x: Vec<f64>,
    a: Vec<f64>,
    p: f64,
}

impl ToyGroundedModel {
    /// Weights uniform in ±1/√fan_in, biases zero. An embedding lookup is a
    /// layer over a one-hot input, so its rows are uniform in ±1.
    pub fn init(vocab: Vocab, dims: Dims, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let embedding = uniform(&mut rng, vocab.len() * dims.embed, 1.0);
        let w1 = uniform(&mut rng, dims.hidden * dims.input(), 1.0 / (dims.input().max(1) as f64).sqrt());
        let w2 = uniform(&mut rng, dims.hidden, 1.0 / (dims.hidden.max(1) as f64).sqrt());
        ToyGroundedModel {
            vocab,
            dims,
            embedding,
            w1,
            b1: vec![0.0; dims.hidden],
            w2,
            b2: 0.0,
        }
    }

    pub fn zeroed(vocab: Vocab, dims: Dims) -> Self {
        let mut m = Self::init(vocab, dims, 0);
        m.embedding.iter_mut().for_each(|v| *v = 0.0);
        m.w1.iter_mut().for_each(|v| *v = 0.0);
        m.w2.iter_mut().for_each(|v| *v = 0.0);
        m
    }

    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<usize> {
        self.vocab.encode(tokens)
    }

    pub fn example<S: AsRef<str>>(&self, tokens: &[S], context: &[f64], label: Label) -> Example {
        Example {
            ids: self.encode(tokens),
            context: context.to_vec(),
            label,
        }
    }

    fn row(&self, id: usize) -> &[f64] {
        let d = self.dims.embed;
        &self.embedding[id * d..(id + 1) * d]
    }

    fn activations(&self, ids: &[usize], context: &[f64]) -> Activations {
        let d = self.dims.embed;
        let n = ids.len();
        let mut x = vec![0.0; self.dims.input()];
        if n > 0 {
            for &id in ids {
                for (k, e) in self.row(id).iter().enumerate() {
                    x[k] += e;
                }
            }
            x[..d].iter_mut().for_each(|v| *v /= n as f64);
        }
        let ctx = &mut x[d..];
        for (slot, v) in ctx.iter_mut().zip(context) {
            *slot = *v;
        }
        let inp = self.dims.input();
        let a: Vec<f64> = (0..self.dims.hidden)
            .map(|j| {
                let row = &self.w1[j * inp..(j + 1) * inp];
                (row.iter().zip(&x).map(|(w, v)| w * v).sum::<f64>() + self.b1[j]).tanh()
            })
            .collect();
        let z2 = a.iter().zip(&self.w2).map(|(a, w)| a * w).sum::<f64>() + self.b2;
        Activations { x, a, p: sigmoid(z2) }
    }

    /// Probability that the statement is true.
    pub fn forward_ids(&self, ids: &[usize], context: &[f64]) -> f64 {
        self.activations(ids, context).p
    }

    pub fn forward<S: AsRef<str>>(&self, tokens: &[S], context: &[f64]) -> f64 {
        self.forward_ids(&self.encode(tokens), context)
    }

    pub fn loss(&self, ex: &Example) -> f64 {
        bce_loss(self.forward_ids(&ex.ids, &ex.context), ex.label)
    }

    /// Loss and its gradient, accumulated into `grads` with weight `scale`.
    fn accumulate(&self, ex: &Example, scale: f64, grads: &mut Gradients) -> f64 {
        let act = self.activations(&ex.ids, &ex.context);
        let loss = bce_loss(act.p, ex.label);
        let y = if ex.label.as_bool() { 1.0 } else { 0.0 };
        let clamped = act.p < P_CLAMP || act.p > 1.0 - P_CLAMP;
        let dz2 = if clamped { 0.0 } else { (act.p - y) * scale };
        if dz2 == 0.0 {
            return loss;
        }
        let (d, inp) = (self.dims.embed, self.dims.input());
        grads.b2 += dz2;
        let mut dx = vec![0.0; inp];
        for j in 0..self.dims.hidden {
            grads.w2[j] += dz2 * act.a[j];
            let dz1 = dz2 * self.w2[j] * (1.0 - act.a[j] * act.a[j]);
            grads.b1[j] += dz1;
            let row = &self.w1[j * inp..(j + 1) * inp];
            let grow = &mut grads.w1[j * inp..(j + 1) * inp];
            for k in 0..inp {
                grow[k] += dz1 * act.x[k];
                dx[k] += dz1 * row[k];
            }
        }
        let n = ex.ids.len();
        for &id in &ex.ids {
            let g = &mut grads.embedding[id * d..(id + 1) * d];
            for k in 0..d {
                g[k] += dx[k] / n as f64;
            }
        }
        loss
    }

    /// Gradient of the mean loss over `batch`.
    pub fn gradients(&self, batch: &[Example]) -> (f64, Gradients) {
        let mut grads = Gradients::zeros(self);
        if batch.is_empty() {
            return (0.0, grads);
        }
        let scale = 1.0 / batch.len() as f64;
        let loss: f64 = batch.iter().map(|ex| self.accumulate(ex, scale, &mut grads)).sum();
        (loss * scale, grads)
    }

    /// One plain gradient-descent step on the mean batch loss. Returns that
    /// loss as measured before the step.
    pub fn train_step(&mut self, batch: &[Example], lr: f64) -> f64 {
        let (loss, g) = self.gradients(batch);
        if lr == 0.0 {
            return loss;
        }
        let step = |p: &mut [f64], g: &[f64]| p.iter_mut().zip(g).for_each(|(p, g)| *p -= lr * g);
        step(&mut self.embedding, &g.embedding);
        step(&mut self.w1, &g.w1);
        step(&mut self.b1, &g.b1);
        step(&mut self.w2, &g.w2);
        self.b2 -= lr * g.b2;
        loss
    }

    pub fn block_mut(&mut self, block: Block) -> &mut [f64] {
        match block {
            Block::Embedding => &mut self.embedding,
            Block::HiddenWeight => &mut self.w1,
            Block::HiddenBias => &mut self.b1,
            Block::OutputWeight => &mut self.w2,
            Block::OutputBias => std::slice::from_mut(&mut self.b2),
        }
    }

    pub fn num_parameters(&self) -> usize {
        self.embedding.len() + self.w1.len() + self.b1.len() + self.w2.len() + 1
    }

    /// Max over checked coordinates of |analytic − numeric| / max(1, |numeric|),
    /// numeric gradients by central differences with step `eps`. Blocks larger
    /// than `max_per_block` are checked on an evenly strided subset, always
    /// including every embedding row the example touches.
    pub fn grad_check_sampled(&self, ex: &Example, eps: f64, max_per_block: usize) -> f64 {
        let (_, analytic) = self.gradients(std::slice::from_ref(ex));
        let mut probe = self.clone();
        let mut worst: f64 = 0.0;
        for block in BLOCKS {
            let len = analytic.block(block).len();
            let mut coords: Vec<usize> = if len <= max_per_block {
                (0..len).collect()
            } else {
                let stride = len.div_ceil(max_per_block);
                (0..len).step_by(stride).collect()
            };
            if block == Block::Embedding {
                let d = self.dims.embed;
                for &id in &ex.ids {
                    coords.extend(id * d..(id + 1) * d);
                }
                coords.sort_unstable();
                coords.dedup();
            }
            for i in coords {
                let orig = probe.block_mut(block)[i];
                probe.block_mut(block)[i] = orig + eps;
                let up = probe.loss(ex);
                probe.block_mut(block)[i] = orig - eps;
                let down = probe.loss(ex);
                probe.block_mut(block)[i] = orig;
                let numeric = (up - down) / (2.0 * eps);
                let a = analytic.block(block)[i];
                worst = worst.max((a - numeric).abs() / numeric.abs().max(1.0));
            }
        }
        worst
    }

    /// Finite-difference check over every parameter.
    pub fn grad_check(&self, ex: &Example, eps: f64) -> f64 {
        self.grad_check_sampled(ex, eps, usize::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> ToyGroundedModel {
        let vocab = Vocab::build([vec!["the", "cube", "is", "red", "not", "left", "of", "sphere"]]);
        ToyGroundedModel::init(vocab, Dims { embed: 6, hidden: 5, context: 4 }, seed)
    }

    fn example(m: &ToyGroundedModel, label: Label) -> Example {
        m.example(&["the", "cube", "is", "not", "red", "zzz"], &[1.0, 0.0, 2.0, 0.5], label)
    }

    #[test]
    fn init_is_seeded() {
        assert_eq!(small(1), small(1));
        assert_ne!(small(1).w1, small(2).w1);
        let m = ToyGroundedModel::init(Vocab::default(), Dims::new(0), 3);
        let p = m.forward(&["anything"], &[]);
        assert!(p > 0.0 && p < 1.0);
    }

    #[test]
    fn zero_parameters_give_half() {
        let m = ToyGroundedModel::zeroed(Vocab::default(), Dims::new(3));
        assert_eq!(m.forward(&["a", "b"], &[1.0, 2.0, 3.0]), 0.5);
        assert!((bce_loss(0.5, Label::True) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn bce_matches_independent_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p: f64 = rng.gen_range(0.001..0.999);
            let y: bool = rng.gen();
            let independent = if y { -(p.ln()) } else { -((1.0 - p).ln()) };
            assert!((bce_loss(p, Label::from_bool(y)) - independent).abs() < 1e-12);
        }
        assert!(bce_loss(1.0, Label::True) <= 2.0 * P_CLAMP);
        assert!(bce_loss(0.0, Label::False) <= 2.0 * P_CLAMP);
        assert!((bce_loss(0.0, Label::True) - (-P_CLAMP.ln())).abs() < 1e-9);
    }

    #[test]
    fn full_gradient_check() {
        for seed in 0..5 {
            let m = small(seed);
            for label in [Label::True, Label::False] {
                assert!(m.grad_check(&example(&m, label), 1e-5) < 1e-6);
            }
        }
    }

    #[test]
    fn zero_lr_is_noop_and_small_step_descends() {
        let mut m = small(4);
        let ex = example(&m, Label::True);
        let before = m.clone();
        m.train_step(std::slice::from_ref(&ex), 0.0);
        assert_eq!(m, before);
        let l0 = m.loss(&ex);
        m.train_step(std::slice::from_ref(&ex), 1e-3);
        assert!(m.loss(&ex) < l0);
    }

    #[test]
    fn output_in_open_interval() {
        let m = small(9);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let len = rng.gen_range(0..8);
            let ids: Vec<usize> = (0..len).map(|_| rng.gen_range(0..m.vocab.len())).collect();
            let ctx: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let p = m.forward_ids(&ids, &ctx);
            assert!(p > 0.0 && p < 1.0);
        }
    }

    #[test]
    fn pooling_ignores_word_order() {
        let m = small(2);
        let a = m.forward(&["the", "cube", "is", "left", "of", "the", "sphere"], &[0.0; 4]);
        let b = m.forward(&["the", "sphere", "is", "left", "of", "the", "cube"], &[0.0; 4]);
        assert!((a - b).abs() < 1e-12);
    }
}
