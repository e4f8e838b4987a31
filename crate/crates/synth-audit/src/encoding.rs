//! Record preprocessing and mixed-type distance metrics.
//!
//! Records are encoded as a one-hot categorical block plus a min-max
//! normalized continuous block. Two distances operate on the encoded form:
//! a generalized cosine distance in [0, 1] and a weighted Minkowski distance
//! of configurable order.

use crate::data::{AttributeKind, Cell, Dataset, Record, Schema};
use crate::error::{Error, Result};

/// Per continuous attribute: the (min, max) pair used for normalization,
/// estimated from the dataset the stats were built on.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationStats {
    /// (min, max) per continuous attribute, in schema order of the
    /// continuous subset.
    pub ranges: Vec<(f64, f64)>,
}

impl NormalizationStats {
    /// Estimate stats from a dataset. Empty datasets produce degenerate
    /// (0, 0) ranges, which normalize every value to 0.
    pub fn from_dataset(dataset: &Dataset) -> Self {
        let ranges = dataset
            .schema()
            .continuous_indices()
            .into_iter()
            .map(|f| match dataset.schema().kind(f) {
                AttributeKind::Continuous {
                    observed_min,
                    observed_max,
                } => (*observed_min, *observed_max),
                AttributeKind::Categorical { .. } => unreachable!(),
            })
            .collect();
        Self { ranges }
    }
}

/// Encoded record: one-hot categorical block and normalized continuous block,
/// both laid out in schema attribute order. The fingerprint ties the encoding
/// to the schema and stats that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedRecord {
    pub cat_block: Vec<f64>,
    pub cont_block: Vec<f64>,
    pub fingerprint: u64,
}

fn fnv1a(bytes: &[u8], mut state: u64) -> u64 {
    for &b in bytes {
        state ^= b as u64;
        state = state.wrapping_mul(0x0000_0100_0000_01b3);
    }
    state
}

/// Stable fingerprint of schema layout plus normalization stats.
pub fn schema_fingerprint(schema: &Schema, stats: &NormalizationStats) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for (name, kind) in schema.attributes() {
        h = fnv1a(name.as_bytes(), h);
        match kind {
            AttributeKind::Categorical { values } => {
                h = fnv1a(&[0x01], h);
                for v in values {
                    h = fnv1a(v.as_bytes(), h);
                }
            }
            AttributeKind::Continuous { .. } => {
                h = fnv1a(&[0x02], h);
            }
        }
    }
    for (min, max) in &stats.ranges {
        h = fnv1a(&min.to_bits().to_le_bytes(), h);
        h = fnv1a(&max.to_bits().to_le_bytes(), h);
    }
    h
}

/// Min-max normalize one continuous value. A constant column maps to 0;
/// values outside the stats range (possible when stats come from a different
/// dataset than the record) are clamped into [0, 1].
fn normalize(value: f64, min: f64, max: f64) -> f64 {
    if max <= min {
        return 0.0;
    }
    ((value - min) / (max - min)).clamp(0.0, 1.0)
}

/// Encode a record against a schema and normalization stats.
pub fn encode(record: &Record, schema: &Schema, stats: &NormalizationStats) -> Result<EncodedRecord> {
    if !record.conforms_to(schema) {
        return Err(Error::SchemaMismatch(
            "record does not conform to schema".into(),
        ));
    }
    let cont_count = schema.continuous_indices().len();
    if stats.ranges.len() != cont_count {
        return Err(Error::SchemaMismatch(format!(
            "stats cover {} continuous attributes, schema has {cont_count}",
            stats.ranges.len()
        )));
    }
    let mut cat_block = Vec::new();
    let mut cont_block = Vec::with_capacity(cont_count);
    let mut cont_pos = 0;
    for (f, cell) in record.cells.iter().enumerate() {
        match (schema.kind(f), cell) {
            (AttributeKind::Categorical { values }, Cell::Cat(v)) => {
                let offset = cat_block.len();
                cat_block.resize(offset + values.len(), 0.0);
                cat_block[offset + *v as usize] = 1.0;
            }
            (AttributeKind::Continuous { .. }, Cell::Cont(x)) => {
                let (min, max) = stats.ranges[cont_pos];
                cont_block.push(normalize(*x, min, max));
                cont_pos += 1;
            }
            _ => unreachable!("conforms_to guarantees cell/kind agreement"),
        }
    }
    Ok(EncodedRecord {
        cat_block,
        cont_block,
        fingerprint: schema_fingerprint(schema, stats),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine similarity with the zero-vector convention: both vectors zero -> 1,
/// exactly one zero -> 0. Preserves d(x, x) = 0 and keeps the distance in
/// [0, 1] where the plain formula is undefined.
fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 && nb == 0.0 {
        return 1.0;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

fn check_pair(a: &EncodedRecord, b: &EncodedRecord) -> Result<()> {
    if a.fingerprint != b.fingerprint {
        return Err(Error::FingerprintMismatch);
    }
    Ok(())
}

/// Generalized cosine distance over mixed attribute types:
/// `1 - (|F_cat|/F) cos(cat blocks) - (|F_cont|/F) cos(cont blocks)`.
///
/// An empty attribute class carries weight 0 and its term is skipped.
pub fn mixed_cosine_distance(a: &EncodedRecord, b: &EncodedRecord, schema: &Schema) -> Result<f64> {
    check_pair(a, b)?;
    let f = schema.len() as f64;
    let n_cat = schema.categorical_indices().len() as f64;
    let n_cont = schema.continuous_indices().len() as f64;
    let mut d = 1.0;
    if n_cat > 0.0 {
        d -= (n_cat / f) * cosine_similarity(&a.cat_block, &b.cat_block);
    }
    if n_cont > 0.0 {
        d -= (n_cont / f) * cosine_similarity(&a.cont_block, &b.cont_block);
    }
    // All-categorical identical records can land at -1e-17 through rounding.
    Ok(d.clamp(0.0, 1.0))
}

fn minkowski(a: &[f64], b: &[f64], p: u32) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs().powi(p as i32))
        .sum();
    sum.powf(1.0 / p as f64)
}

/// Weighted Minkowski distance over the encoded blocks:
/// `(|F_cat|/F) L_p(cat blocks) + (|F_cont|/F) L_p(cont blocks)`.
///
/// Neither term is rescaled to [0, 1]; the categorical block alone can
/// contribute up to `(|F_cat|/F) * (2 |F_cat|)^(1/p)`.
pub fn minkowski_mixed_distance(
    a: &EncodedRecord,
    b: &EncodedRecord,
    schema: &Schema,
    p: u32,
) -> Result<f64> {
    check_pair(a, b)?;
    if p < 1 {
        return Err(Error::InvalidOrder(p));
    }
    let f = schema.len() as f64;
    let n_cat = schema.categorical_indices().len() as f64;
    let n_cont = schema.continuous_indices().len() as f64;
    let mut d = 0.0;
    if n_cat > 0.0 {
        d += (n_cat / f) * minkowski(&a.cat_block, &b.cat_block, p);
    }
    if n_cont > 0.0 {
        d += (n_cont / f) * minkowski(&a.cont_block, &b.cont_block, p);
    }
    Ok(d)
}

/// Distance metric selector shared by scoring, selection, and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Cosine,
    Minkowski { p: u32 },
}

impl Metric {
    pub fn id(&self) -> String {
        match self {
            Metric::Cosine => "cosine".into(),
            Metric::Minkowski { p } => format!("minkowski-p{p}"),
        }
    }

    pub fn parse(text: &str) -> Result<Metric> {
        match text {
            "cosine" => Ok(Metric::Cosine),
            other => {
                if let Some(p) = other.strip_prefix("minkowski-p") {
                    let p: u32 = p
                        .parse()
                        .map_err(|_| Error::InvalidConfig(format!("bad metric {other:?}")))?;
                    if p < 1 {
                        return Err(Error::InvalidOrder(p));
                    }
                    Ok(Metric::Minkowski { p })
                } else {
                    Err(Error::InvalidConfig(format!("unknown metric {other:?}")))
                }
            }
        }
    }

    pub fn distance(&self, a: &EncodedRecord, b: &EncodedRecord, schema: &Schema) -> Result<f64> {
        match self {
            Metric::Cosine => mixed_cosine_distance(a, b, schema),
            Metric::Minkowski { p } => minkowski_mixed_distance(a, b, schema, *p),
        }
    }
}

/// Encode every row of a dataset with shared stats.
pub fn encode_dataset(dataset: &Dataset, stats: &NormalizationStats) -> Result<Vec<EncodedRecord>> {
    dataset
        .rows()
        .iter()
        .map(|r| encode(r, dataset.schema(), stats))
        .collect()
}
