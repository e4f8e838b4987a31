//! Sequential CART synthesizer.
//!
//! The first attribute is drawn at random (seeded) and modeled by its
//! empirical marginal; every later attribute gets a classification or
//! regression tree over the attributes visited before it. Sampling walks the
//! visit order, routing each partially generated record down the fitted tree
//! and bootstrap-drawing from the reached leaf's payload of observed values.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::{AttributeKind, Cell, Dataset, Record, Schema};
use crate::error::{Error, Result};
use crate::seed;

/// CART fitting controls.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CartConfig {
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    #[serde(default = "default_min_leaf")]
    pub min_leaf: usize,
    /// Visit attributes in seeded-random order instead of schema order after
    /// the random first attribute.
    #[serde(default)]
    pub random_visit_order: bool,
}

fn default_max_depth() -> usize {
    8
}

fn default_min_leaf() -> usize {
    5
}

impl Default for CartConfig {
    fn default() -> Self {
        Self {
            max_depth: default_max_depth(),
            min_leaf: default_min_leaf(),
            random_visit_order: false,
        }
    }
}

impl CartConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 || self.min_leaf == 0 {
            return Err(Error::InvalidGeneratorSpec(
                "cart max_depth and min_leaf must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Split rule on a predictor attribute: rows satisfying the rule go left.
#[derive(Debug, Clone, PartialEq)]
enum SplitRule {
    CatEquals(u32),
    ContLeq(f64),
}

impl SplitRule {
    fn send_left(&self, cell: &Cell) -> bool {
        match (self, cell) {
            (SplitRule::CatEquals(v), Cell::Cat(c)) => c == v,
            (SplitRule::ContLeq(t), Cell::Cont(x)) => x <= t,
            _ => unreachable!("rule kind matches predictor kind by construction"),
        }
    }
}

#[derive(Debug, Clone)]
enum CartNode {
    Split {
        predictor: usize,
        rule: SplitRule,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Observed target values of the training rows in this leaf.
        payload: Vec<Cell>,
    },
}

/// Tree for one attribute, predicting it from earlier-visited attributes.
#[derive(Debug, Clone)]
pub struct AttributeTree {
    nodes: Vec<CartNode>,
}

impl AttributeTree {
    fn leaf_payload(&self, record_so_far: &[Cell]) -> &[Cell] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                CartNode::Leaf { payload } => return payload,
                CartNode::Split {
                    predictor,
                    rule,
                    left,
                    right,
                } => {
                    at = if rule.send_left(&record_so_far[*predictor]) {
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
            CartNode::Leaf { .. } => 0,
            CartNode::Split { left, right, .. } => {
                1 + self.depth_from(*left).max(self.depth_from(*right))
            }
        }
    }

    pub fn depth(&self) -> usize {
        self.depth_from(0)
    }
}

/// Fitted sequential CART model.
#[derive(Debug, Clone)]
pub struct CartModel {
    pub schema: Schema,
    /// Attribute visit order; the first entry is the seeded-random root.
    pub visit_order: Vec<usize>,
    /// Empirical multiset of the first attribute's observed values.
    pub root_marginal: Vec<Cell>,
    /// One tree per later attribute, aligned with `visit_order[1..]`.
    pub trees: Vec<AttributeTree>,
}

/// Impurity of a set of target values: Gini for categorical targets,
/// sum of squared deviations for continuous ones. Both are additive over
/// children when weighted by child size.
fn impurity(values: &[Cell], rows: &[usize], universe: usize) -> f64 {
    let n = rows.len() as f64;
    if rows.is_empty() {
        return 0.0;
    }
    if universe > 0 {
        let mut counts = vec![0usize; universe];
        for &r in rows {
            counts[values[r].as_cat() as usize] += 1;
        }
        let sum_sq: f64 = counts.iter().map(|&c| (c as f64 / n).powi(2)).sum();
        n * (1.0 - sum_sq)
    } else {
        let mean: f64 = rows.iter().map(|&r| values[r].as_cont()).sum::<f64>() / n;
        rows.iter()
            .map(|&r| (values[r].as_cont() - mean).powi(2))
            .sum()
    }
}

struct CartBuilder<'a> {
    dataset: &'a Dataset,
    target: usize,
    target_universe: usize,
    predictors: &'a [usize],
    config: &'a CartConfig,
}

impl CartBuilder<'_> {
    fn target_values(&self) -> Vec<Cell> {
        self.dataset
            .rows()
            .iter()
            .map(|r| r.cells[self.target])
            .collect()
    }

    /// Best (predictor, rule) by total child impurity; None when nothing
    /// improves or a child would fall under min_leaf.
    fn best_split(&self, targets: &[Cell], rows: &[usize]) -> Option<(usize, SplitRule)> {
        let parent = impurity(targets, rows, self.target_universe);
        if parent <= 1e-12 {
            return None;
        }
        let mut best: Option<(usize, SplitRule, f64)> = None;
        for &predictor in self.predictors {
            let rules: Vec<SplitRule> = match self.dataset.schema().kind(predictor) {
                AttributeKind::Categorical { .. } => {
                    let mut seen: Vec<u32> = rows
                        .iter()
                        .map(|&r| self.dataset.row(r).cells[predictor].as_cat())
                        .collect();
                    seen.sort_unstable();
                    seen.dedup();
                    seen.into_iter().map(SplitRule::CatEquals).collect()
                }
                AttributeKind::Continuous { .. } => {
                    let mut seen: Vec<f64> = rows
                        .iter()
                        .map(|&r| self.dataset.row(r).cells[predictor].as_cont())
                        .collect();
                    seen.sort_by(f64::total_cmp);
                    seen.dedup();
                    seen.windows(2)
                        .map(|w| SplitRule::ContLeq(0.5 * (w[0] + w[1])))
                        .collect()
                }
            };
            for rule in rules {
                let (left, right): (Vec<usize>, Vec<usize>) = rows
                    .iter()
                    .partition(|&&r| rule.send_left(&self.dataset.row(r).cells[predictor]));
                if left.len() < self.config.min_leaf || right.len() < self.config.min_leaf {
                    continue;
                }
                let score = impurity(targets, &left, self.target_universe)
                    + impurity(targets, &right, self.target_universe);
                let improves = match &best {
                    None => score < parent - 1e-12,
                    Some((_, _, s)) => score < *s - 1e-12,
                };
                if improves {
                    best = Some((predictor, rule, score));
                }
            }
        }
        best.map(|(p, r, _)| (p, r))
    }

    fn build(&self, nodes: &mut Vec<CartNode>, targets: &[Cell], rows: Vec<usize>, depth: usize) -> usize {
        let id = nodes.len();
        if depth >= self.config.max_depth || rows.len() < 2 * self.config.min_leaf {
            nodes.push(self.leaf(targets, &rows));
            return id;
        }
        let Some((predictor, rule)) = self.best_split(targets, &rows) else {
            nodes.push(self.leaf(targets, &rows));
            return id;
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&r| rule.send_left(&self.dataset.row(r).cells[predictor]));
        nodes.push(CartNode::Leaf { payload: vec![] });
        let left = self.build(nodes, targets, left_rows, depth + 1);
        let right = self.build(nodes, targets, right_rows, depth + 1);
        nodes[id] = CartNode::Split {
            predictor,
            rule,
            left,
            right,
        };
        id
    }

    fn leaf(&self, targets: &[Cell], rows: &[usize]) -> CartNode {
        CartNode::Leaf {
            payload: rows.iter().map(|&r| targets[r]).collect(),
        }
    }
}

/// Fit the sequential CART model.
pub fn fit_synthpop(dataset: &Dataset, config: &CartConfig, seed_value: u64) -> Result<CartModel> {
    config.validate()?;
    if dataset.len() < config.min_leaf {
        return Err(Error::EmptyDataset);
    }
    let f = dataset.schema().len();
    let mut rng = seed::rng(seed_value, &[seed::phase::GENERATOR, 10]);
    let first = rng.random_range(0..f);
    let mut rest: Vec<usize> = (0..f).filter(|&i| i != first).collect();
    if config.random_visit_order {
        rest.shuffle(&mut rng);
    }
    let mut visit_order = vec![first];
    visit_order.extend(&rest);

    let root_marginal: Vec<Cell> = dataset.rows().iter().map(|r| r.cells[first]).collect();

    let mut trees = Vec::with_capacity(rest.len());
    for (position, &target) in rest.iter().enumerate() {
        let predictors = &visit_order[..position + 1];
        let builder = CartBuilder {
            dataset,
            target,
            target_universe: dataset.schema().kind(target).universe_size(),
            predictors,
            config,
        };
        let targets = builder.target_values();
        let mut nodes = Vec::new();
        builder.build(&mut nodes, &targets, (0..dataset.len()).collect(), 0);
        trees.push(AttributeTree { nodes });
    }

    Ok(CartModel {
        schema: dataset.schema().clone(),
        visit_order,
        root_marginal,
        trees,
    })
}

impl CartModel {
    /// Draw `m` records: bootstrap the root marginal, then walk each tree
    /// with the partially generated record and bootstrap the reached leaf.
    pub fn sample(&self, m: usize, seed_value: u64) -> Dataset {
        let mut rng = seed::rng(seed_value, &[seed::phase::GENERATOR, 11]);
        let f = self.schema.len();
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let mut cells = vec![Cell::Cont(0.0); f];
            let root_draw = self.root_marginal[rng.random_range(0..self.root_marginal.len())];
            cells[self.visit_order[0]] = root_draw;
            for (position, &attribute) in self.visit_order[1..].iter().enumerate() {
                let payload = self.trees[position].leaf_payload(&cells);
                cells[attribute] = payload[rng.random_range(0..payload.len())];
            }
            rows.push(Record::new(cells));
        }
        Dataset::new(self.schema.clone(), rows).expect("sampled rows conform to training schema")
    }

    /// Largest fitted tree depth.
    pub fn max_tree_depth(&self) -> usize {
        self.trees.iter().map(|t| t.depth()).max().unwrap_or(0)
    }
}
