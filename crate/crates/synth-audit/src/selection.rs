//! Vulnerability scoring and target-record selection.
//!
//! The vulnerability score of a record is its mean distance to its k closest
//! neighbors in the dataset (self excluded by row index, so duplicates count
//! as neighbors at distance zero). Records are ranked by decreasing score and
//! the top-R taken as attack targets. Three baseline selectors are provided
//! for comparison: random, rare-value, and log-likelihood.

use rand::seq::index::sample as index_sample;
use rayon::prelude::*;

use crate::data::{AttributeKind, Cell, Dataset};
use crate::encoding::{encode_dataset, Metric, NormalizationStats};
use crate::error::{Error, Result};
use crate::seed;

/// Per-record vulnerability scores plus the decreasing-score ranking.
#[derive(Debug, Clone)]
pub struct VulnerabilityRanking {
    /// Score per row, indexed by row position.
    pub scores: Vec<f64>,
    /// Row indices sorted by decreasing score (ties by row index).
    pub order: Vec<usize>,
    pub k: usize,
    pub metric_id: String,
}

/// Which selector produced a set of target records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionMethod {
    Distance,
    Random,
    RareValue,
    LogLikelihood,
}

impl serde::Serialize for SelectionMethod {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for SelectionMethod {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        SelectionMethod::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl SelectionMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SelectionMethod::Distance => "distance",
            SelectionMethod::Random => "random",
            SelectionMethod::RareValue => "rare_value",
            SelectionMethod::LogLikelihood => "log_likelihood",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "distance" => Ok(SelectionMethod::Distance),
            "random" => Ok(SelectionMethod::Random),
            "rare_value" => Ok(SelectionMethod::RareValue),
            "log_likelihood" => Ok(SelectionMethod::LogLikelihood),
            other => Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

/// Output of a selector: R distinct row indices plus the per-record score the
/// method used (vulnerability score, marginal log-likelihood, ...).
#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub method: SelectionMethod,
    pub selected: Vec<usize>,
    /// Per-row diagnostic score, indexed by row position. Empty for the
    /// random selector, which scores nothing.
    pub diagnostics: Vec<f64>,
}

/// Mean distance to the k closest neighbors, for every row.
///
/// Exact full pairwise scan with a per-row running selection, parallelized by
/// rows; neighbor ties are broken by row index.
pub fn vulnerability_scores(
    dataset: &Dataset,
    k: usize,
    metric: Metric,
) -> Result<VulnerabilityRanking> {
    let n = dataset.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    if k == 0 || k > n - 1 {
        return Err(Error::KTooLarge { k, max: n - 1 });
    }
    let stats = NormalizationStats::from_dataset(dataset);
    let encoded = encode_dataset(dataset, &stats)?;
    let schema = dataset.schema();

    let scores: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut dists: Vec<f64> = Vec::with_capacity(n - 1);
            for j in 0..n {
                if j == i {
                    continue;
                }
                // Metric errors cannot occur here: encodings share stats.
                dists.push(metric.distance(&encoded[i], &encoded[j], schema).unwrap());
            }
            dists.sort_by(f64::total_cmp);
            dists.iter().take(k).sum::<f64>() / k as f64
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    Ok(VulnerabilityRanking {
        scores,
        order,
        k,
        metric_id: metric.id(),
    })
}

/// Top-R rows by score. When the score at the R-th position is shared by more
/// rows than remaining slots, the boundary subset is drawn uniformly at random.
pub fn select_top_r(ranking: &VulnerabilityRanking, r: usize, seed_value: u64) -> Result<SelectionResult> {
    let n = ranking.order.len();
    if r == 0 || r > n {
        return Err(Error::RTooLarge { r, available: n });
    }
    let boundary_score = ranking.scores[ranking.order[r - 1]];
    let above: Vec<usize> = ranking
        .order
        .iter()
        .copied()
        .filter(|&i| ranking.scores[i] > boundary_score)
        .collect();
    let tied: Vec<usize> = ranking
        .order
        .iter()
        .copied()
        .filter(|&i| ranking.scores[i] == boundary_score)
        .collect();

    let mut selected = above;
    let slots = r - selected.len();
    if tied.len() <= slots {
        selected.extend_from_slice(&tied);
    } else {
        let mut rng = seed::rng(seed_value, &[seed::phase::SELECTION, 0]);
        let mut picked: Vec<usize> = index_sample(&mut rng, tied.len(), slots)
            .into_iter()
            .collect();
        picked.sort_unstable();
        selected.extend(picked.into_iter().map(|p| tied[p]));
    }
    debug_assert_eq!(selected.len(), r);
    Ok(SelectionResult {
        method: SelectionMethod::Distance,
        selected,
        diagnostics: ranking.scores.clone(),
    })
}

/// Uniform sample of R rows, without replacement.
pub fn select_random(dataset: &Dataset, r: usize, seed_value: u64) -> Result<SelectionResult> {
    let n = dataset.len();
    if r > n {
        return Err(Error::RTooLarge { r, available: n });
    }
    let mut rng = seed::rng(seed_value, &[seed::phase::SELECTION, 1]);
    let mut selected: Vec<usize> = index_sample(&mut rng, n, r).into_vec();
    selected.sort_unstable();
    Ok(SelectionResult {
        method: SelectionMethod::Random,
        selected,
        diagnostics: Vec::new(),
    })
}

/// Nearest-rank percentile of a sorted slice.
fn percentile_nearest_rank(sorted: &[f64], pct: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Rows qualifying as rare-valued: at least one categorical value with
/// empirical frequency below `rare_threshold` (fraction of rows), or at least
/// one continuous value strictly above that attribute's 95th percentile.
pub fn rare_value_qualifiers(dataset: &Dataset, rare_threshold: f64) -> Vec<bool> {
    let n = dataset.len();
    let schema = dataset.schema();
    let mut cat_freq: Vec<Vec<usize>> = schema
        .attributes()
        .iter()
        .map(|(_, kind)| vec![0usize; kind.universe_size()])
        .collect();
    for row in dataset.rows() {
        for (f, cell) in row.cells.iter().enumerate() {
            if let Cell::Cat(v) = cell {
                cat_freq[f][*v as usize] += 1;
            }
        }
    }
    let mut cont_p95: Vec<Option<f64>> = vec![None; schema.len()];
    for f in 0..schema.len() {
        if schema.kind(f).is_continuous() {
            let mut values: Vec<f64> = dataset.rows().iter().map(|r| r.cells[f].as_cont()).collect();
            values.sort_by(f64::total_cmp);
            cont_p95[f] = Some(percentile_nearest_rank(&values, 95.0));
        }
    }
    dataset
        .rows()
        .iter()
        .map(|row| {
            row.cells.iter().enumerate().any(|(f, cell)| match cell {
                Cell::Cat(v) => (cat_freq[f][*v as usize] as f64) < rare_threshold * n as f64,
                Cell::Cont(x) => *x > cont_p95[f].unwrap(),
            })
        })
        .collect()
}

/// Uniform sample of R rows from the rare-value qualifying set.
pub fn select_rare_value(
    dataset: &Dataset,
    r: usize,
    rare_threshold: f64,
    seed_value: u64,
) -> Result<SelectionResult> {
    let qualifies = rare_value_qualifiers(dataset, rare_threshold);
    let pool: Vec<usize> = (0..dataset.len()).filter(|&i| qualifies[i]).collect();
    if r > pool.len() {
        return Err(Error::NotEnoughQualifyingRecords {
            qualifying: pool.len(),
            requested: r,
        });
    }
    let mut rng = seed::rng(seed_value, &[seed::phase::SELECTION, 2]);
    let mut picked: Vec<usize> = index_sample(&mut rng, pool.len(), r)
        .into_iter()
        .map(|p| pool[p])
        .collect();
    picked.sort_unstable();
    let diagnostics = qualifies.iter().map(|&q| if q { 1.0 } else { 0.0 }).collect();
    Ok(SelectionResult {
        method: SelectionMethod::RareValue,
        selected: picked,
        diagnostics,
    })
}

/// Per-row log-likelihood under independent empirical marginals, with
/// continuous attributes discretized into `buckets` equal-frequency bins.
pub fn log_likelihoods(dataset: &Dataset, buckets: usize) -> Vec<f64> {
    let n = dataset.len();
    let schema = dataset.schema();
    let mut lls = vec![0.0f64; n];
    for f in 0..schema.len() {
        match schema.kind(f) {
            AttributeKind::Categorical { values } => {
                let mut counts = vec![0usize; values.len()];
                for row in dataset.rows() {
                    counts[row.cells[f].as_cat() as usize] += 1;
                }
                for (i, row) in dataset.rows().iter().enumerate() {
                    let p = counts[row.cells[f].as_cat() as usize] as f64 / n as f64;
                    lls[i] += p.ln();
                }
            }
            AttributeKind::Continuous { .. } => {
                // Equal-frequency bucket boundaries by nearest-rank percentile.
                let mut sorted: Vec<f64> =
                    dataset.rows().iter().map(|r| r.cells[f].as_cont()).collect();
                sorted.sort_by(f64::total_cmp);
                let cuts: Vec<f64> = (1..buckets)
                    .map(|b| percentile_nearest_rank(&sorted, 100.0 * b as f64 / buckets as f64))
                    .collect();
                let bucket_of = |x: f64| cuts.iter().take_while(|&&c| x > c).count();
                let mut counts = vec![0usize; buckets];
                for row in dataset.rows() {
                    counts[bucket_of(row.cells[f].as_cont())] += 1;
                }
                for (i, row) in dataset.rows().iter().enumerate() {
                    let p = counts[bucket_of(row.cells[f].as_cont())] as f64 / n as f64;
                    lls[i] += p.ln();
                }
            }
        }
    }
    lls
}

/// The R rows with the lowest marginal log-likelihood, ties broken by row
/// index.
pub fn select_log_likelihood(dataset: &Dataset, r: usize, buckets: usize) -> Result<SelectionResult> {
    let n = dataset.len();
    if r > n {
        return Err(Error::RTooLarge { r, available: n });
    }
    let lls = log_likelihoods(dataset, buckets);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lls[a].total_cmp(&lls[b]).then(a.cmp(&b)));
    let mut selected: Vec<usize> = order.into_iter().take(r).collect();
    selected.sort_unstable();
    Ok(SelectionResult {
        method: SelectionMethod::LogLikelihood,
        selected,
        diagnostics: lls,
    })
}

/// Default neighbor count for the vulnerability score.
pub const DEFAULT_K: usize = 5;
/// Default rare-value frequency threshold (fraction of rows).
pub const DEFAULT_RARE_THRESHOLD: f64 = 0.01;
/// Default equal-frequency bucket count for log-likelihood discretization.
pub const DEFAULT_LL_BUCKETS: usize = 10;
