//! Random-forest meta-classifier over query-answer feature vectors.
//!
//! Written from scratch: bagged binary CART trees with Gini splits over a
//! random feature subset per node, midpoint thresholds, and leaf class-1
//! fractions as probabilities. Trees train independently with per-tree
//! derived seeds, so the fitted model is a pure function of (inputs, seed).

use rand::seq::index::sample as index_sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Forest hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    #[serde(default = "default_n_trees")]
    pub n_trees: usize,
    #[serde(default = "default_forest_depth")]
    pub max_depth: usize,
    /// Number of candidate features per split; defaults to ceil(sqrt(N)).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features_per_split: Option<usize>,
    #[serde(default = "default_min_samples_split")]
    pub min_samples_split: usize,
}

fn default_n_trees() -> usize {
    100
}

fn default_forest_depth() -> usize {
    10
}

fn default_min_samples_split() -> usize {
    2
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: default_n_trees(),
            max_depth: default_forest_depth(),
            features_per_split: None,
            min_samples_split: default_min_samples_split(),
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        prob: f64,
    },
}

/// One decision tree stored as a node arena.
#[derive(Debug, Clone)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, features: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { prob } => return *prob,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if features[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    fn depth_from(&self, at: usize) -> usize {
        match &self.nodes[at] {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => {
                1 + self.depth_from(*left).max(self.depth_from(*right))
            }
        }
    }
}

/// Row-major feature matrix.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    pub data: Vec<f64>,
    pub n_rows: usize,
    pub n_features: usize,
}

impl FeatureMatrix {
    pub fn new(data: Vec<f64>, n_rows: usize, n_features: usize) -> Result<Self> {
        if data.len() != n_rows * n_features {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {n_rows}x{n_features} matrix",
                data.len()
            )));
        }
        Ok(Self {
            data,
            n_rows,
            n_features,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_features = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n_rows * n_features);
        for row in rows {
            if row.len() != n_features {
                return Err(Error::DimensionMismatch("ragged feature rows".into()));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            data,
            n_rows,
            n_features,
        })
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n_features..(r + 1) * self.n_features]
    }
}

/// Fitted forest.
#[derive(Debug, Clone)]
pub struct RandomForestModel {
    trees: Vec<Tree>,
    pub n_features: usize,
    pub seed: u64,
}

struct TreeBuilder<'a> {
    features: &'a FeatureMatrix,
    labels: &'a [u8],
    max_depth: usize,
    min_samples_split: usize,
    features_per_split: usize,
}

impl TreeBuilder<'_> {
    fn gini(pos: usize, total: usize) -> f64 {
        if total == 0 {
            return 0.0;
        }
        let p = pos as f64 / total as f64;
        2.0 * p * (1.0 - p)
    }

    fn leaf(&self, rows: &[usize]) -> Node {
        let pos = rows.iter().filter(|&&r| self.labels[r] == 1).count();
        Node::Leaf {
            prob: pos as f64 / rows.len() as f64,
        }
    }

    /// Best (feature, threshold) over a sampled feature subset, by weighted
    /// child Gini. Returns None when no split improves purity.
    fn best_split(&self, rows: &[usize], rng: &mut ChaCha8Rng) -> Option<(usize, f64)> {
        let total = rows.len();
        let total_pos = rows.iter().filter(|&&r| self.labels[r] == 1).count();
        let parent = Self::gini(total_pos, total);
        if parent == 0.0 {
            return None;
        }
        let candidates: Vec<usize> =
            index_sample(rng, self.features.n_features, self.features_per_split).into_vec();
        let mut best: Option<(usize, f64, f64)> = None; // (feature, threshold, score)
        let mut values: Vec<(f64, u8)> = Vec::with_capacity(total);
        for feature in candidates {
            values.clear();
            values.extend(
                rows.iter()
                    .map(|&r| (self.features.row(r)[feature], self.labels[r])),
            );
            values.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_n = 0usize;
            let mut left_pos = 0usize;
            for i in 0..total - 1 {
                left_n += 1;
                left_pos += values[i].1 as usize;
                if values[i].0 == values[i + 1].0 {
                    continue;
                }
                let right_n = total - left_n;
                let right_pos = total_pos - left_pos;
                let score = (left_n as f64 * Self::gini(left_pos, left_n)
                    + right_n as f64 * Self::gini(right_pos, right_n))
                    / total as f64;
                let improves = match best {
                    None => score < parent - 1e-15,
                    Some((_, _, s)) => score < s - 1e-15,
                };
                if improves {
                    let threshold = 0.5 * (values[i].0 + values[i + 1].0);
                    best = Some((feature, threshold, score));
                }
            }
        }
        best.map(|(f, t, _)| (f, t))
    }

    fn build(&self, nodes: &mut Vec<Node>, rows: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let id = nodes.len();
        if depth >= self.max_depth || rows.len() < self.min_samples_split {
            nodes.push(self.leaf(&rows));
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&rows, rng) else {
            nodes.push(self.leaf(&rows));
            return id;
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&r| self.features.row(r)[feature] <= threshold);
        debug_assert!(!left_rows.is_empty() && !right_rows.is_empty());
        nodes.push(Node::Leaf { prob: 0.0 }); // placeholder
        let left = self.build(nodes, left_rows, depth + 1, rng);
        let right = self.build(nodes, right_rows, depth + 1, rng);
        nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }
}

/// Train a forest on binary-labeled feature rows.
pub fn train_random_forest(
    features: &FeatureMatrix,
    labels: &[u8],
    config: &ForestConfig,
    seed_value: u64,
) -> Result<RandomForestModel> {
    let n = features.n_rows;
    if n == 0 || features.n_features == 0 {
        return Err(Error::EmptyFeatures);
    }
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            scores: n,
            labels: labels.len(),
        });
    }
    let pos = labels.iter().filter(|&&l| l == 1).count();
    if pos == 0 || pos == n {
        return Err(Error::SingleClassTraining);
    }
    let features_per_split = config
        .features_per_split
        .unwrap_or_else(|| (features.n_features as f64).sqrt().ceil() as usize)
        .clamp(1, features.n_features);

    let trees: Vec<Tree> = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(seed_value, &[seed::phase::FOREST, t as u64]);
            let bootstrap: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            let builder = TreeBuilder {
                features,
                labels,
                max_depth: config.max_depth,
                min_samples_split: config.min_samples_split.max(2),
                features_per_split,
            };
            let mut nodes = Vec::new();
            builder.build(&mut nodes, bootstrap, 0, &mut rng);
            Tree { nodes }
        })
        .collect();

    Ok(RandomForestModel {
        trees,
        n_features: features.n_features,
        seed: seed_value,
    })
}

/// Mean per-tree leaf probability for every probe row; used directly as the
/// membership confidence.
pub fn predict_scores(model: &RandomForestModel, features: &FeatureMatrix) -> Result<Vec<f64>> {
    if features.n_features != model.n_features {
        return Err(Error::FeatureArityMismatch {
            expected: model.n_features,
            found: features.n_features,
        });
    }
    Ok((0..features.n_rows)
        .map(|r| {
            let row = features.row(r);
            let sum: f64 = model.trees.iter().map(|t| t.predict(row)).sum();
            sum / model.trees.len() as f64
        })
        .collect())
}

impl RandomForestModel {
    /// Max depth over all trees; exposed for invariants and debugging dumps.
    pub fn max_depth(&self) -> usize {
        self.trees.iter().map(|t| t.depth_from(0)).max().unwrap_or(0)
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Text dump of tree structures for debugging.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, tree) in self.trees.iter().enumerate() {
            out.push_str(&format!("tree {i}\n"));
            for (j, node) in tree.nodes.iter().enumerate() {
                match node {
                    Node::Leaf { prob } => out.push_str(&format!("  {j}: leaf p={prob:.6}\n")),
                    Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => out.push_str(&format!(
                        "  {j}: f{feature} <= {threshold:.6} ? {left} : {right}\n"
                    )),
                }
            }
        }
        out
    }
}
