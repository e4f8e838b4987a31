//! Target-anchored counting queries over synthetic datasets.
//!
//! A counting query counts the rows matching the target record on a subset of
//! attributes: equality for categorical attributes, less-or-equal for
//! continuous ones. The attack answers the same query set against many small
//! synthetic datasets, so the fast path builds one predicate bitmask per
//! attribute and reduces each query to an AND + popcount over 64-bit words.
//! The naive row scan is kept as the reference semantics for every test.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::{AttributeKind, Dataset, Record, Schema};
use crate::error::{Error, Result};
use crate::seed;

/// Comparison operator of one predicate; fixed by the attribute kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Equals,
    LessOrEqual,
}

/// One conjunctive counting query: a non-empty attribute subset with
/// per-attribute thresholds taken from the target record.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingQuery {
    /// Selected attribute indices, strictly increasing.
    pub attributes: Vec<u16>,
}

impl CountingQuery {
    fn matches(&self, row: &Record, target: &Record, schema: &Schema) -> bool {
        self.attributes.iter().all(|&f| {
            let f = f as usize;
            match schema.kind(f) {
                AttributeKind::Categorical { .. } => {
                    row.cells[f].as_cat() == target.cells[f].as_cat()
                }
                AttributeKind::Continuous { .. } => {
                    row.cells[f].as_cont() <= target.cells[f].as_cont()
                }
            }
        })
    }

    /// Operator applied at attribute `f`, by kind.
    pub fn operator(schema: &Schema, f: usize) -> Operator {
        if schema.kind(f).is_categorical() {
            Operator::Equals
        } else {
            Operator::LessOrEqual
        }
    }
}

/// A target record plus the sampled query list. Thresholds always equal the
/// target's attribute values; the constructor owns that invariant.
#[derive(Debug, Clone)]
pub struct QuerySet {
    target: Record,
    queries: Vec<CountingQuery>,
    pub seed: u64,
}

impl QuerySet {
    pub fn target(&self) -> &Record {
        &self.target
    }

    pub fn queries(&self) -> &[CountingQuery] {
        &self.queries
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }
}

/// Sample `n` attribute subsets uniformly from the 2^F - 1 non-empty subsets,
/// with replacement, and bind their thresholds to the target record.
pub fn sample_queries(schema: &Schema, target: &Record, n: usize, seed_value: u64) -> Result<QuerySet> {
    if n == 0 {
        return Err(Error::InvalidConfig("query count must be >= 1".into()));
    }
    if !target.conforms_to(schema) {
        return Err(Error::SchemaMismatch("target does not conform".into()));
    }
    let f = schema.len();
    if f > 64 {
        return Err(Error::InvalidConfig(format!(
            "query sampling supports up to 64 attributes, schema has {f}"
        )));
    }
    let mut rng: ChaCha8Rng = seed::rng(seed_value, &[seed::phase::QUERIES]);
    let mask_all: u64 = if f == 64 { u64::MAX } else { (1u64 << f) - 1 };
    let mut queries = Vec::with_capacity(n);
    for _ in 0..n {
        // Rejection sampling keeps the draw uniform over non-empty subsets.
        let mut subset = 0u64;
        while subset == 0 {
            subset = rng.random::<u64>() & mask_all;
        }
        let attributes: Vec<u16> = (0..f as u16).filter(|&i| subset >> i & 1 == 1).collect();
        queries.push(CountingQuery { attributes });
    }
    Ok(QuerySet {
        target: target.clone(),
        queries,
        seed: seed_value,
    })
}

/// Reference evaluator: row-by-row predicate scan.
pub fn answer_queries_naive(dataset: &Dataset, queries: &QuerySet) -> Result<Vec<u32>> {
    if !queries.target.conforms_to(dataset.schema()) {
        return Err(Error::SchemaMismatch(
            "query target does not conform to dataset schema".into(),
        ));
    }
    let schema = dataset.schema();
    Ok(queries
        .queries
        .iter()
        .map(|q| {
            dataset
                .rows()
                .iter()
                .filter(|row| q.matches(row, &queries.target, schema))
                .count() as u32
        })
        .collect())
}

/// Per-attribute predicate masks over one dataset's rows.
///
/// Masks are rebuilt per synthetic dataset: datasets are small and numerous,
/// so the build cost is amortized across the whole query list.
pub struct MaskIndex {
    words: usize,
    masks: Vec<Vec<u64>>,
}

impl MaskIndex {
    /// Build the bitmask per attribute: bit r set iff row r satisfies the
    /// target-anchored predicate on that attribute.
    pub fn build(dataset: &Dataset, target: &Record) -> Result<MaskIndex> {
        if !target.conforms_to(dataset.schema()) {
            return Err(Error::SchemaMismatch(
                "query target does not conform to dataset schema".into(),
            ));
        }
        let n = dataset.len();
        let words = n.div_ceil(64);
        let schema = dataset.schema();
        let masks = (0..schema.len())
            .map(|f| {
                let mut mask = vec![0u64; words];
                match schema.kind(f) {
                    AttributeKind::Categorical { .. } => {
                        let t = target.cells[f].as_cat();
                        for (r, row) in dataset.rows().iter().enumerate() {
                            if row.cells[f].as_cat() == t {
                                mask[r / 64] |= 1 << (r % 64);
                            }
                        }
                    }
                    AttributeKind::Continuous { .. } => {
                        let t = target.cells[f].as_cont();
                        for (r, row) in dataset.rows().iter().enumerate() {
                            if row.cells[f].as_cont() <= t {
                                mask[r / 64] |= 1 << (r % 64);
                            }
                        }
                    }
                }
                mask
            })
            .collect();
        Ok(MaskIndex { words, masks })
    }

    /// AND the selected attribute masks and popcount the result.
    pub fn count(&self, query: &CountingQuery) -> u32 {
        let mut total = 0u32;
        for w in 0..self.words {
            let mut acc = u64::MAX;
            for &f in &query.attributes {
                acc &= self.masks[f as usize][w];
                if acc == 0 {
                    break;
                }
            }
            total += acc.count_ones();
        }
        total
    }
}

/// Fast evaluator: columnar bitset layout with precomputed predicate masks.
/// Bit-exact equal to [`answer_queries_naive`].
pub fn answer_queries(dataset: &Dataset, queries: &QuerySet) -> Result<Vec<u32>> {
    let index = MaskIndex::build(dataset, &queries.target)?;
    Ok(queries.queries.iter().map(|q| index.count(q)).collect())
}

/// Debug dump: one `(attribute subset, count)` line per query.
pub fn render_query_dump(dataset: &Dataset, queries: &QuerySet) -> Result<String> {
    let counts = answer_queries(dataset, queries)?;
    let schema = dataset.schema();
    let mut out = String::new();
    out.push_str("# query dump\n");
    out.push_str(&format!(
        "# dataset rows: {} queries: {}\n",
        dataset.len(),
        queries.len()
    ));
    out.push_str("# columns: subset\tcount\n");
    for (q, count) in queries.queries().iter().zip(&counts) {
        let subset: Vec<&str> = q
            .attributes
            .iter()
            .map(|&f| schema.name(f as usize))
            .collect();
        out.push_str(&format!("{}\t{count}\n", subset.join("&")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_dataset, AttributeKind, Cell, LoadOptions, Schema};
    use crate::demo;
    use rand::SeedableRng;

    fn mixed_schema() -> Schema {
        Schema::new(vec![
            (
                "color".into(),
                AttributeKind::Categorical {
                    values: vec!["a".into(), "b".into(), "c".into()],
                },
            ),
            (
                "size".into(),
                AttributeKind::Continuous {
                    observed_min: 0.0,
                    observed_max: 0.0,
                },
            ),
        ])
        .unwrap()
    }

    #[test]
    fn two_attribute_subsets_enumerate() {
        let schema = mixed_schema();
        let target = Record::new(vec![Cell::Cat(0), Cell::Cont(1.0)]);
        let qs = sample_queries(&schema, &target, 50, 3).unwrap();
        for q in qs.queries() {
            assert!(!q.attributes.is_empty());
            assert!(q.attributes.iter().all(|&f| f < 2));
        }
        // All three non-empty subsets of {0,1} appear in 50 draws.
        let mut seen = std::collections::HashSet::new();
        for q in qs.queries() {
            seen.insert(q.attributes.clone());
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn oversampling_repeats_subsets() {
        // 15 attributes give 32767 distinct subsets; 100000 draws must repeat.
        let attrs: Vec<(String, AttributeKind)> = (0..15)
            .map(|i| {
                (
                    format!("a{i}"),
                    AttributeKind::Categorical {
                        values: vec!["x".into(), "y".into()],
                    },
                )
            })
            .collect();
        let schema = Schema::new(attrs).unwrap();
        let target = Record::new(vec![Cell::Cat(0); 15]);
        let qs = sample_queries(&schema, &target, 100_000, 5).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut repeated = false;
        for q in qs.queries() {
            if !seen.insert(q.attributes.clone()) {
                repeated = true;
                break;
            }
        }
        assert!(repeated, "pigeonhole: 100000 draws over 32767 subsets");
    }

    #[test]
    fn same_seed_same_queries() {
        let schema = mixed_schema();
        let target = Record::new(vec![Cell::Cat(1), Cell::Cont(0.5)]);
        let a = sample_queries(&schema, &target, 64, 11).unwrap();
        let b = sample_queries(&schema, &target, 64, 11).unwrap();
        assert_eq!(a.queries(), b.queries());
    }

    #[test]
    fn empty_dataset_counts_zero() {
        let schema = mixed_schema();
        let empty = parse_dataset("", &schema, LoadOptions::default()).unwrap();
        let target = Record::new(vec![Cell::Cat(0), Cell::Cont(0.0)]);
        let qs = sample_queries(&schema, &target, 10, 0).unwrap();
        assert!(answer_queries(&empty, &qs).unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn duplicates_of_target_always_match() {
        let schema = mixed_schema();
        let ds = parse_dataset("a,1.0\na,1.0\nb,9.0\n", &schema, LoadOptions::default()).unwrap();
        let target = ds.row(0).clone();
        let qs = sample_queries(&schema, &target, 40, 2).unwrap();
        for count in answer_queries(&ds, &qs).unwrap() {
            assert!(count >= 2, "exact duplicates satisfy every anchored query");
        }
    }

    #[test]
    fn single_row_full_subset_counts_one() {
        let schema = mixed_schema();
        let ds = parse_dataset("b,2.5\n", &schema, LoadOptions::default()).unwrap();
        let target = ds.row(0).clone();
        let qs = QuerySet {
            target,
            queries: vec![CountingQuery {
                attributes: vec![0, 1],
            }],
            seed: 0,
        };
        assert_eq!(answer_queries_naive(&ds, &qs).unwrap(), vec![1]);
    }

    #[test]
    fn continuous_leq_is_inclusive() {
        let schema = mixed_schema();
        let ds = parse_dataset("a,2.5\n", &schema, LoadOptions::default()).unwrap();
        let target = Record::new(vec![Cell::Cat(0), Cell::Cont(2.5)]);
        let qs = QuerySet {
            target,
            queries: vec![CountingQuery {
                attributes: vec![1],
            }],
            seed: 0,
        };
        assert_eq!(answer_queries_naive(&ds, &qs).unwrap(), vec![1]);
        assert_eq!(answer_queries(&ds, &qs).unwrap(), vec![1]);
    }

    #[test]
    fn fast_path_matches_naive_on_random_inputs() {
        let population = demo::sample_population(500, 21);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for trial in 0..10 {
            let target = population.row(rng.random_range(0..population.len())).clone();
            let qs = sample_queries(population.schema(), &target, 1000, 100 + trial).unwrap();
            let fast = answer_queries(&population, &qs).unwrap();
            let naive = answer_queries_naive(&population, &qs).unwrap();
            assert_eq!(fast, naive);
        }
    }

    #[test]
    fn adding_attributes_never_increases_count() {
        let population = demo::sample_population(300, 33);
        let target = population.row(7).clone();
        let schema = population.schema();
        let base = QuerySet {
            target: target.clone(),
            queries: vec![
                CountingQuery {
                    attributes: vec![0],
                },
                CountingQuery {
                    attributes: vec![0, 3],
                },
                CountingQuery {
                    attributes: vec![0, 3, 6],
                },
                CountingQuery {
                    attributes: (0..schema.len() as u16).collect(),
                },
            ],
            seed: 0,
        };
        let counts = answer_queries(&population, &base).unwrap();
        for pair in counts.windows(2) {
            assert!(pair[1] <= pair[0]);
        }
    }
}
