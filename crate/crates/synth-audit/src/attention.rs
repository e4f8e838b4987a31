//! Record-level neural membership attack.
//!
//! The synthetic dataset is collapsed to its unique records with multiplicity
//! and distance-to-target columns, embedded by a shared MLP, attended against
//! the target embedding, and classified by a prediction MLP. Forward and
//! backward passes are written out by hand; a finite-difference gradient
//! check validates every parameter tensor.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::data::{Cell, Dataset, Record, Schema};
use crate::encoding::{encode, mixed_cosine_distance, NormalizationStats};
use crate::error::{Error, Result};
use crate::seed;

/// Where the attention logits come from.
///
/// The forward recipe computes keys but scores rows against values, which
/// leaves the key projection unused. `Keys` (default) scores `<q, k_j>` so
/// that every declared parameter participates; `Values` reproduces the
/// literal `<q, v_j>` recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttentionLogits {
    Keys,
    Values,
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub dropout: f64,
    pub validation_fraction: f64,
    /// Keep only the top X unique records closest to the target.
    pub top_x: usize,
    pub f_emb: usize,
    pub f_att: usize,
    pub emb_hidden: usize,
    pub pred_hidden: usize,
    pub attention_logits: AttentionLogits,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            batch_size: 20,
            learning_rate: 1e-3,
            dropout: 0.15,
            validation_fraction: 0.10,
            top_x: 100,
            f_emb: 20,
            f_att: 15,
            emb_hidden: 20,
            pred_hidden: 10,
            attention_logits: AttentionLogits::Keys,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::InvalidConfig(
                "validation_fraction must lie in (0, 1)".into(),
            ));
        }
        if self.top_x == 0 || self.batch_size == 0 || self.epochs == 0 {
            return Err(Error::InvalidConfig(
                "top_x, batch_size, and epochs must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Matrix that zero-pads collapsed synthetic records to `top_x` rows.
/// Row layout: one-hot categoricals, normalized continuous values,
/// multiplicity, distance to target; rows sorted by increasing distance.
#[derive(Debug, Clone)]
pub struct PreprocessedSet {
    /// `top_x` rows, each `width` wide; rows past `n_valid` are zero padding.
    pub rows: Vec<Vec<f64>>,
    pub n_valid: usize,
    pub width: usize,
}

fn record_key(record: &Record) -> Vec<u64> {
    record
        .cells
        .iter()
        .map(|c| match c {
            Cell::Cat(v) => (*v as u64) << 1,
            Cell::Cont(x) => (x.to_bits() << 1) | 1,
        })
        .collect()
}

/// Feature row of one record: encoded blocks plus multiplicity and distance.
fn feature_row(
    record: &Record,
    schema: &Schema,
    stats: &NormalizationStats,
    multiplicity: f64,
    distance: f64,
) -> Result<Vec<f64>> {
    let enc = encode(record, schema, stats)?;
    let mut row = Vec::with_capacity(enc.cat_block.len() + enc.cont_block.len() + 2);
    row.extend_from_slice(&enc.cat_block);
    row.extend_from_slice(&enc.cont_block);
    row.push(multiplicity);
    row.push(distance);
    Ok(row)
}

/// Collapse a synthetic dataset to its unique records, attach multiplicity
/// and distance-to-target, rank by increasing distance, and keep the top X.
/// Also returns the target's own feature row (multiplicity 1, distance 0).
pub fn preprocess_topx(
    synthetic: &Dataset,
    target: &Record,
    top_x: usize,
    schema: &Schema,
    stats: &NormalizationStats,
) -> Result<(PreprocessedSet, Vec<f64>)> {
    if synthetic.is_empty() {
        return Err(Error::EmptySynthetic);
    }
    // Unique collapse by exact cell equality, preserving first-seen order.
    let mut index_of: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut uniques: Vec<(Record, usize)> = Vec::new();
    for row in synthetic.rows() {
        let key = record_key(row);
        match index_of.get(&key) {
            Some(&i) => uniques[i].1 += 1,
            None => {
                index_of.insert(key, uniques.len());
                uniques.push((row.clone(), 1));
            }
        }
    }

    let target_enc = encode(target, schema, stats)?;
    let mut scored: Vec<(usize, f64)> = uniques
        .iter()
        .enumerate()
        .map(|(i, (record, _))| {
            let enc = encode(record, schema, stats)?;
            Ok((i, mixed_cosine_distance(&enc, &target_enc, schema)?))
        })
        .collect::<Result<_>>()?;
    // Stable sort keeps first-occurrence order on distance ties.
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));
    scored.truncate(top_x);

    let mut rows = Vec::with_capacity(top_x.min(scored.len()));
    for &(i, distance) in &scored {
        let (record, multiplicity) = &uniques[i];
        rows.push(feature_row(
            record,
            schema,
            stats,
            *multiplicity as f64,
            distance,
        )?);
    }
    let width = rows[0].len();
    let n_valid = rows.len();
    if top_x != usize::MAX {
        rows.resize(top_x, vec![0.0; width]);
    }

    let target_row = feature_row(target, schema, stats, 1.0, 0.0)?;
    Ok((
        PreprocessedSet {
            rows,
            n_valid,
            width,
        },
        target_row,
    ))
}

/// Dense matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Tensor {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    fn glorot(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Self {
        let bound = (6.0 / (rows + cols) as f64).sqrt();
        let data = (0..rows * cols)
            .map(|_| rng.random_range(-bound..bound))
            .collect();
        Self { rows, cols, data }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

pub const TENSOR_NAMES: [&str; 10] = [
    "emb_w1", "emb_b1", "emb_w2", "emb_b2", "w_q", "w_k", "w_v", "pred_w1", "pred_b1", "pred_w2",
];

/// All learnable parameters. Biases are 1-row tensors; the final prediction
/// layer folds its bias into `pred_w2` as the last row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttentionModelParams {
    pub input_width: usize,
    pub emb_w1: Tensor,
    pub emb_b1: Tensor,
    pub emb_w2: Tensor,
    pub emb_b2: Tensor,
    pub w_q: Tensor,
    pub w_k: Tensor,
    pub w_v: Tensor,
    pub pred_w1: Tensor,
    pub pred_b1: Tensor,
    /// `pred_hidden + 1` rows by 1 column; the extra row is the output bias.
    pub pred_w2: Tensor,
    pub dropout: f64,
    pub attention_logits: AttentionLogits,
}

impl AttentionModelParams {
    /// Fresh parameters with symmetric uniform initialization.
    pub fn init(input_width: usize, config: &TrainConfig, seed_value: u64) -> Self {
        let mut rng = seed::rng(seed_value, &[seed::phase::ATTENTION, 0]);
        Self {
            input_width,
            emb_w1: Tensor::glorot(input_width, config.emb_hidden, &mut rng),
            emb_b1: Tensor::zeros(1, config.emb_hidden),
            emb_w2: Tensor::glorot(config.emb_hidden, config.f_emb, &mut rng),
            emb_b2: Tensor::zeros(1, config.f_emb),
            w_q: Tensor::glorot(config.f_emb, config.f_att, &mut rng),
            w_k: Tensor::glorot(config.f_emb, config.f_att, &mut rng),
            w_v: Tensor::glorot(config.f_emb, config.f_att, &mut rng),
            pred_w1: Tensor::glorot(config.f_att, config.pred_hidden, &mut rng),
            pred_b1: Tensor::zeros(1, config.pred_hidden),
            pred_w2: Tensor::glorot(config.pred_hidden + 1, 1, &mut rng),
            dropout: config.dropout,
            attention_logits: config.attention_logits,
        }
    }

    fn zeros_like(&self) -> Self {
        let z = |t: &Tensor| Tensor::zeros(t.rows, t.cols);
        Self {
            input_width: self.input_width,
            emb_w1: z(&self.emb_w1),
            emb_b1: z(&self.emb_b1),
            emb_w2: z(&self.emb_w2),
            emb_b2: z(&self.emb_b2),
            w_q: z(&self.w_q),
            w_k: z(&self.w_k),
            w_v: z(&self.w_v),
            pred_w1: z(&self.pred_w1),
            pred_b1: z(&self.pred_b1),
            pred_w2: z(&self.pred_w2),
            dropout: self.dropout,
            attention_logits: self.attention_logits,
        }
    }

    pub fn tensor(&self, name: &str) -> &Tensor {
        match name {
            "emb_w1" => &self.emb_w1,
            "emb_b1" => &self.emb_b1,
            "emb_w2" => &self.emb_w2,
            "emb_b2" => &self.emb_b2,
            "w_q" => &self.w_q,
            "w_k" => &self.w_k,
            "w_v" => &self.w_v,
            "pred_w1" => &self.pred_w1,
            "pred_b1" => &self.pred_b1,
            "pred_w2" => &self.pred_w2,
            other => panic!("unknown tensor {other}"),
        }
    }

    pub fn tensor_mut(&mut self, name: &str) -> &mut Tensor {
        match name {
            "emb_w1" => &mut self.emb_w1,
            "emb_b1" => &mut self.emb_b1,
            "emb_w2" => &mut self.emb_w2,
            "emb_b2" => &mut self.emb_b2,
            "w_q" => &mut self.w_q,
            "w_k" => &mut self.w_k,
            "w_v" => &mut self.w_v,
            "pred_w1" => &mut self.pred_w1,
            "pred_b1" => &mut self.pred_b1,
            "pred_w2" => &mut self.pred_w2,
            other => panic!("unknown tensor {other}"),
        }
    }
}

/// Dropout masks for one forward pass; absent masks mean eval mode.
struct DropoutMasks {
    emb_rows: Vec<Vec<f64>>,
    emb_target: Vec<f64>,
    pred: Vec<f64>,
}

fn draw_mask(len: usize, rate: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let keep = 1.0 - rate;
    (0..len)
        .map(|_| {
            if rng.random::<f64>() < rate {
                0.0
            } else {
                1.0 / keep
            }
        })
        .collect()
}

/// Everything the backward pass needs from a forward evaluation.
pub struct ForwardCache {
    z1: Vec<Vec<f64>>,
    d1: Vec<Vec<f64>>,
    emb: Vec<Vec<f64>>,
    z1t: Vec<f64>,
    d1t: Vec<f64>,
    emb_t: Vec<f64>,
    q: Vec<f64>,
    keys: Vec<Vec<f64>>,
    values: Vec<Vec<f64>>,
    weights: Vec<f64>,
    d_att: Vec<f64>,
    z3: Vec<f64>,
    d3: Vec<f64>,
    pub h_pred: f64,
}

impl ForwardCache {
    /// Attention weights over the valid rows; they sum to 1.
    pub fn attention_weights(&self) -> &[f64] {
        &self.weights
    }
}

fn affine(input: &[f64], w: &Tensor, b: Option<&Tensor>) -> Vec<f64> {
    let mut out = vec![0.0; w.cols];
    for (i, &x) in input.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for c in 0..w.cols {
            out[c] += x * w.at(i, c);
        }
    }
    if let Some(b) = b {
        for c in 0..w.cols {
            out[c] += b.at(0, c);
        }
    }
    out
}

fn relu(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| x.max(0.0)).collect()
}

fn hadamard(v: &[f64], mask: &[f64]) -> Vec<f64> {
    v.iter().zip(mask).map(|(a, b)| a * b).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn embed(
    params: &AttentionModelParams,
    input: &[f64],
    mask: Option<&[f64]>,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let z1 = affine(input, &params.emb_w1, Some(&params.emb_b1));
    let a1 = relu(&z1);
    let d1 = match mask {
        Some(m) => hadamard(&a1, m),
        None => a1,
    };
    let emb = affine(&d1, &params.emb_w2, Some(&params.emb_b2));
    (z1, d1, emb)
}

fn forward_cached(
    params: &AttentionModelParams,
    pre: &PreprocessedSet,
    target_row: &[f64],
    masks: Option<&DropoutMasks>,
) -> Result<ForwardCache> {
    if pre.width != params.input_width || target_row.len() != params.input_width {
        return Err(Error::DimensionMismatch(format!(
            "input width {} vs model width {}",
            pre.width, params.input_width
        )));
    }
    if pre.n_valid == 0 {
        return Err(Error::EmptySynthetic);
    }
    let n = pre.n_valid;
    let mut z1 = Vec::with_capacity(n);
    let mut d1 = Vec::with_capacity(n);
    let mut emb = Vec::with_capacity(n);
    for (j, row) in pre.rows.iter().take(n).enumerate() {
        let mask = masks.map(|m| m.emb_rows[j].as_slice());
        let (z, d, e) = embed(params, row, mask);
        z1.push(z);
        d1.push(d);
        emb.push(e);
    }
    let (z1t, d1t, emb_t) = embed(params, target_row, masks.map(|m| m.emb_target.as_slice()));

    let q = affine(&emb_t, &params.w_q, None);
    let keys: Vec<Vec<f64>> = emb.iter().map(|e| affine(e, &params.w_k, None)).collect();
    let values: Vec<Vec<f64>> = emb.iter().map(|e| affine(e, &params.w_v, None)).collect();

    // Padding rows never reach the softmax: logits are computed for valid
    // rows only, which is equivalent to masking them at negative infinity.
    let logits: Vec<f64> = match params.attention_logits {
        AttentionLogits::Keys => keys.iter().map(|k| dot(&q, k)).collect(),
        AttentionLogits::Values => values.iter().map(|v| dot(&q, v)).collect(),
    };
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - top).exp()).collect();
    let total: f64 = exps.iter().sum();
    let weights: Vec<f64> = exps.iter().map(|&e| e / total).collect();

    let f_att = params.w_v.cols;
    let mut d_att = vec![0.0; f_att];
    for (j, v) in values.iter().enumerate() {
        for c in 0..f_att {
            d_att[c] += weights[j] * v[c];
        }
    }

    let z3 = affine(&d_att, &params.pred_w1, Some(&params.pred_b1));
    let a3 = relu(&z3);
    let d3 = match masks {
        Some(m) => hadamard(&a3, &m.pred),
        None => a3,
    };
    let mut h_pred = params.pred_w2.at(params.pred_w2.rows - 1, 0); // bias row
    for (i, &x) in d3.iter().enumerate() {
        h_pred += x * params.pred_w2.at(i, 0);
    }

    Ok(ForwardCache {
        z1,
        d1,
        emb,
        z1t,
        d1t,
        emb_t,
        q,
        keys,
        values,
        weights,
        d_att,
        z3,
        d3,
        h_pred,
    })
}

/// Eval-mode forward pass: pre-sigmoid score plus cached intermediates.
pub fn forward(
    params: &AttentionModelParams,
    pre: &PreprocessedSet,
    target_row: &[f64],
) -> Result<ForwardCache> {
    forward_cached(params, pre, target_row, None)
}

/// Membership probability in eval mode.
pub fn score(
    params: &AttentionModelParams,
    pre: &PreprocessedSet,
    target_row: &[f64],
) -> Result<f64> {
    Ok(sigmoid(forward(params, pre, target_row)?.h_pred))
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Numerically stable binary cross-entropy from the pre-sigmoid score.
fn bce_from_logit(h: f64, label: f64) -> f64 {
    h.max(0.0) - h * label + (1.0 + (-h.abs()).exp()).ln()
}

/// Gradients of BCE(sigmoid(h_pred), label) for one world, accumulated into
/// `grads`.
fn backward(
    params: &AttentionModelParams,
    pre: &PreprocessedSet,
    target_row: &[f64],
    cache: &ForwardCache,
    label: f64,
    masks: Option<&DropoutMasks>,
    grads: &mut AttentionModelParams,
) {
    let n = pre.n_valid;
    let f_att = params.w_v.cols;
    let f_emb = params.emb_w2.cols;
    let pred_hidden = params.pred_w1.cols;

    let dh = sigmoid(cache.h_pred) - label;

    // prediction head
    let bias_row = params.pred_w2.rows - 1;
    *grads.pred_w2.at_mut(bias_row, 0) += dh;
    let mut dz3 = vec![0.0; pred_hidden];
    for i in 0..pred_hidden {
        *grads.pred_w2.at_mut(i, 0) += dh * cache.d3[i];
        let dd3 = dh * params.pred_w2.at(i, 0);
        let da3 = match masks {
            Some(m) => dd3 * m.pred[i],
            None => dd3,
        };
        dz3[i] = if cache.z3[i] > 0.0 { da3 } else { 0.0 };
        *grads.pred_b1.at_mut(0, i) += dz3[i];
    }
    let mut dd_att = vec![0.0; f_att];
    for r in 0..f_att {
        for c in 0..pred_hidden {
            *grads.pred_w1.at_mut(r, c) += cache.d_att[r] * dz3[c];
            dd_att[r] += params.pred_w1.at(r, c) * dz3[c];
        }
    }

    // attention-weighted sum of values
    let mut d_values = vec![vec![0.0; f_att]; n];
    let mut d_weights = vec![0.0; n];
    for j in 0..n {
        for c in 0..f_att {
            d_values[j][c] += cache.weights[j] * dd_att[c];
        }
        d_weights[j] = dot(&dd_att, &cache.values[j]);
    }

    // softmax
    let weighted_sum: f64 = (0..n).map(|j| cache.weights[j] * d_weights[j]).sum();
    let d_logits: Vec<f64> = (0..n)
        .map(|j| cache.weights[j] * (d_weights[j] - weighted_sum))
        .collect();

    // logits
    let mut dq = vec![0.0; f_att];
    let mut d_keys = vec![vec![0.0; f_att]; n];
    match params.attention_logits {
        AttentionLogits::Keys => {
            for j in 0..n {
                for c in 0..f_att {
                    dq[c] += d_logits[j] * cache.keys[j][c];
                    d_keys[j][c] += d_logits[j] * cache.q[c];
                }
            }
        }
        AttentionLogits::Values => {
            for j in 0..n {
                for c in 0..f_att {
                    dq[c] += d_logits[j] * cache.values[j][c];
                    d_values[j][c] += d_logits[j] * cache.q[c];
                }
            }
        }
    }

    // projections
    let mut d_emb_t = vec![0.0; f_emb];
    for r in 0..f_emb {
        for c in 0..f_att {
            *grads.w_q.at_mut(r, c) += cache.emb_t[r] * dq[c];
            d_emb_t[r] += params.w_q.at(r, c) * dq[c];
        }
    }
    let mut d_emb = vec![vec![0.0; f_emb]; n];
    for j in 0..n {
        for r in 0..f_emb {
            for c in 0..f_att {
                *grads.w_k.at_mut(r, c) += cache.emb[j][r] * d_keys[j][c];
                d_emb[j][r] += params.w_k.at(r, c) * d_keys[j][c];
                *grads.w_v.at_mut(r, c) += cache.emb[j][r] * d_values[j][c];
                d_emb[j][r] += params.w_v.at(r, c) * d_values[j][c];
            }
        }
    }

    // shared embedding MLP: rows and target accumulate into the same weights
    let backprop_embed = |input: &[f64],
                              z1: &[f64],
                              d1: &[f64],
                              d_out: &[f64],
                              mask: Option<&[f64]>,
                              grads: &mut AttentionModelParams| {
        let hidden = params.emb_w1.cols;
        for c in 0..f_emb {
            *grads.emb_b2.at_mut(0, c) += d_out[c];
        }
        let mut dd1 = vec![0.0; hidden];
        for i in 0..hidden {
            for c in 0..f_emb {
                *grads.emb_w2.at_mut(i, c) += d1[i] * d_out[c];
                dd1[i] += params.emb_w2.at(i, c) * d_out[c];
            }
        }
        for i in 0..hidden {
            let da1 = match mask {
                Some(m) => dd1[i] * m[i],
                None => dd1[i],
            };
            let dz1 = if z1[i] > 0.0 { da1 } else { 0.0 };
            if dz1 == 0.0 {
                continue;
            }
            *grads.emb_b1.at_mut(0, i) += dz1;
            for (r, &x) in input.iter().enumerate() {
                if x != 0.0 {
                    *grads.emb_w1.at_mut(r, i) += x * dz1;
                }
            }
        }
    };

    for j in 0..n {
        backprop_embed(
            &pre.rows[j],
            &cache.z1[j],
            &cache.d1[j],
            &d_emb[j],
            masks.map(|m| m.emb_rows[j].as_slice()),
            grads,
        );
    }
    backprop_embed(
        target_row,
        &cache.z1t,
        &cache.d1t,
        &d_emb_t,
        masks.map(|m| m.emb_target.as_slice()),
        grads,
    );
}

/// Adamax state: first moment and infinity-norm accumulators.
struct Adamax {
    m: AttentionModelParams,
    u: AttentionModelParams,
    t: usize,
    beta1: f64,
    beta2: f64,
    eps: f64,
}

impl Adamax {
    fn new(params: &AttentionModelParams) -> Self {
        Self {
            m: params.zeros_like(),
            u: params.zeros_like(),
            t: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    fn step(&mut self, params: &mut AttentionModelParams, grads: &AttentionModelParams, lr: f64) {
        self.t += 1;
        let bias_correction = 1.0 - self.beta1.powi(self.t as i32);
        for name in TENSOR_NAMES {
            let g = grads.tensor(name);
            {
                let m = self.m.tensor_mut(name);
                for (mi, &gi) in m.data.iter_mut().zip(&g.data) {
                    *mi = self.beta1 * *mi + (1.0 - self.beta1) * gi;
                }
                let u = self.u.tensor_mut(name);
                for (ui, &gi) in u.data.iter_mut().zip(&g.data) {
                    *ui = (self.beta2 * *ui).max(gi.abs());
                }
            }
            let m = self.m.tensor(name);
            let u = self.u.tensor(name);
            let p = params.tensor_mut(name);
            for i in 0..p.data.len() {
                p.data[i] -= lr / bias_correction * m.data[i] / (u.data[i] + self.eps);
            }
        }
    }
}

/// One labeled training example: a preprocessed world plus its IN/OUT label.
pub struct LabeledWorld {
    pub pre: PreprocessedSet,
    pub label: u8,
}

/// Train the attack on preprocessed shadow worlds with mini-batch Adamax.
///
/// A seeded fraction of the worlds is held out; the parameter snapshot with
/// the lowest validation loss is returned. Deterministic given the seed.
pub fn train(
    worlds: &[LabeledWorld],
    target_row: &[f64],
    config: &TrainConfig,
    seed_value: u64,
) -> Result<AttentionModelParams> {
    config.validate()?;
    let n = worlds.len();
    let positives = worlds.iter().filter(|w| w.label == 1).count();
    if positives < 2 || n - positives < 2 {
        return Err(Error::SingleClassTraining);
    }

    let mut split_rng = seed::rng(seed_value, &[seed::phase::ATTENTION, 1]);
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(&mut split_rng);
    let n_val = ((n as f64) * config.validation_fraction).ceil() as usize;
    let n_val = n_val.clamp(1, n - 1);
    let (val_idx, train_idx) = indices.split_at(n_val);

    let mut params = AttentionModelParams::init(worlds[0].pre.width, config, seed_value);
    let mut optimizer = Adamax::new(&params);
    let mut epoch_rng = seed::rng(seed_value, &[seed::phase::ATTENTION, 2]);
    let mut dropout_rng = seed::rng(seed_value, &[seed::phase::ATTENTION, 3]);

    let val_loss = |p: &AttentionModelParams| -> Result<f64> {
        let mut total = 0.0;
        for &i in val_idx {
            let cache = forward_cached(p, &worlds[i].pre, target_row, None)?;
            total += bce_from_logit(cache.h_pred, worlds[i].label as f64);
        }
        Ok(total / val_idx.len() as f64)
    };

    let mut best = params.clone();
    let mut best_loss = val_loss(&params)?;

    let mut order: Vec<usize> = train_idx.to_vec();
    for _epoch in 0..config.epochs {
        order.shuffle(&mut epoch_rng);
        for batch in order.chunks(config.batch_size) {
            let mut grads = params.zeros_like();
            for &i in batch {
                let world = &worlds[i];
                let masks = DropoutMasks {
                    emb_rows: (0..world.pre.n_valid)
                        .map(|_| draw_mask(params.emb_w1.cols, params.dropout, &mut dropout_rng))
                        .collect(),
                    emb_target: draw_mask(params.emb_w1.cols, params.dropout, &mut dropout_rng),
                    pred: draw_mask(params.pred_w1.cols, params.dropout, &mut dropout_rng),
                };
                let cache = forward_cached(&params, &world.pre, target_row, Some(&masks))?;
                backward(
                    &params,
                    &world.pre,
                    target_row,
                    &cache,
                    world.label as f64,
                    Some(&masks),
                    &mut grads,
                );
            }
            let scale = 1.0 / batch.len() as f64;
            for name in TENSOR_NAMES {
                for g in grads.tensor_mut(name).data.iter_mut() {
                    *g *= scale;
                }
            }
            optimizer.step(&mut params, &grads, config.learning_rate);
        }
        let loss = val_loss(&params)?;
        if loss < best_loss {
            best_loss = loss;
            best = params.clone();
        }
    }
    Ok(best)
}

/// Result of a finite-difference gradient check.
#[derive(Debug, Clone)]
pub struct GradientCheckReport {
    /// Max relative error over every entry of every parameter tensor.
    pub max_rel_error: f64,
    /// Tensors whose analytic and numeric gradients are identically zero;
    /// a parameter the computation graph never touches shows up here.
    pub zero_grad_tensors: Vec<&'static str>,
}

/// Compare analytic gradients against central finite differences for every
/// parameter tensor, with dropout off.
pub fn gradient_check(
    params: &AttentionModelParams,
    pre: &PreprocessedSet,
    target_row: &[f64],
    label: f64,
    epsilon_fd: f64,
) -> Result<GradientCheckReport> {
    let mut grads = params.zeros_like();
    let cache = forward_cached(params, pre, target_row, None)?;
    backward(params, pre, target_row, &cache, label, None, &mut grads);

    let mut probe = params.clone();
    let mut max_rel_error: f64 = 0.0;
    let mut zero_grad_tensors = Vec::new();
    for name in TENSOR_NAMES {
        let mut tensor_all_zero = true;
        let len = params.tensor(name).data.len();
        for i in 0..len {
            let original = probe.tensor(name).data[i];
            probe.tensor_mut(name).data[i] = original + epsilon_fd;
            let up = bce_from_logit(forward_cached(&probe, pre, target_row, None)?.h_pred, label);
            probe.tensor_mut(name).data[i] = original - epsilon_fd;
            let down =
                bce_from_logit(forward_cached(&probe, pre, target_row, None)?.h_pred, label);
            probe.tensor_mut(name).data[i] = original;

            let numeric = (up - down) / (2.0 * epsilon_fd);
            let analytic = grads.tensor(name).data[i];
            if numeric.abs() > 1e-12 || analytic.abs() > 1e-12 {
                tensor_all_zero = false;
            }
            let denom = analytic.abs().max(numeric.abs()).max(1e-8);
            max_rel_error = max_rel_error.max((analytic - numeric).abs() / denom);
        }
        if tensor_all_zero {
            zero_grad_tensors.push(name);
        }
    }
    Ok(GradientCheckReport {
        max_rel_error,
        zero_grad_tensors,
    })
}
