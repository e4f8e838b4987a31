//! Schema-aware loading, validation, and sampling of tabular datasets.
//!
//! A dataset is a multiset of records over a fixed schema of categorical and
//! continuous attributes. The schema is always an explicit sidecar file, never
//! inferred from the data: the categorical/continuous split drives both the
//! distance metric and the counting queries, so it has to be auditable.
//!
//! File formats:
//! - data: comma-separated text, one record per line, optional header line,
//!   UTF-8, no quoting (cell values must not contain commas);
//! - schema: JSON listing per attribute its name and kind, with an explicit
//!   value list for categorical attributes.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use rand::seq::index::sample as index_sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Kind of a single attribute.
///
/// Continuous kinds carry the observed value range of the dataset they belong
/// to; the range is recomputed whenever a dataset is constructed and feeds the
/// min-max normalization stats.
#[derive(Debug, Clone, PartialEq)]
pub enum AttributeKind {
    Categorical { values: Vec<String> },
    Continuous { observed_min: f64, observed_max: f64 },
}

impl AttributeKind {
    pub fn is_categorical(&self) -> bool {
        matches!(self, AttributeKind::Categorical { .. })
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self, AttributeKind::Continuous { .. })
    }

    /// Number of distinct values for categorical kinds.
    pub fn universe_size(&self) -> usize {
        match self {
            AttributeKind::Categorical { values } => values.len(),
            AttributeKind::Continuous { .. } => 0,
        }
    }
}

/// Ordered list of named attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    attributes: Vec<(String, AttributeKind)>,
}

impl Schema {
    pub fn new(attributes: Vec<(String, AttributeKind)>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::SchemaParseError("schema has no attributes".into()));
        }
        let mut names = HashSet::new();
        for (name, kind) in &attributes {
            if !names.insert(name.clone()) {
                return Err(Error::SchemaParseError(format!(
                    "duplicate attribute name {name:?}"
                )));
            }
            if let AttributeKind::Categorical { values } = kind {
                if values.is_empty() {
                    return Err(Error::SchemaParseError(format!(
                        "categorical attribute {name:?} has an empty value universe"
                    )));
                }
                let mut seen = HashSet::new();
                for v in values {
                    if !seen.insert(v) {
                        return Err(Error::SchemaParseError(format!(
                            "categorical attribute {name:?} repeats value {v:?}"
                        )));
                    }
                    if v.contains(',') {
                        return Err(Error::SchemaParseError(format!(
                            "value {v:?} of attribute {name:?} contains a comma"
                        )));
                    }
                }
            }
        }
        Ok(Self { attributes })
    }

    /// Attribute count F.
    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[(String, AttributeKind)] {
        &self.attributes
    }

    pub fn name(&self, index: usize) -> &str {
        &self.attributes[index].0
    }

    pub fn kind(&self, index: usize) -> &AttributeKind {
        &self.attributes[index].1
    }

    /// Indices of categorical attributes, in schema order.
    pub fn categorical_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.kind(i).is_categorical())
            .collect()
    }

    /// Indices of continuous attributes, in schema order.
    pub fn continuous_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.kind(i).is_continuous())
            .collect()
    }

    /// Symbol for a categorical cell.
    pub fn symbol(&self, attribute: usize, value_index: u32) -> &str {
        match self.kind(attribute) {
            AttributeKind::Categorical { values } => &values[value_index as usize],
            AttributeKind::Continuous { .. } => panic!("attribute {attribute} is continuous"),
        }
    }

    /// Two schemas are compatible when names, kind classes, and categorical
    /// universes agree; observed continuous ranges are allowed to differ.
    pub fn compatible_with(&self, other: &Schema) -> bool {
        self.len() == other.len()
            && self
                .attributes
                .iter()
                .zip(other.attributes.iter())
                .all(|((na, ka), (nb, kb))| {
                    na == nb
                        && match (ka, kb) {
                            (
                                AttributeKind::Categorical { values: va },
                                AttributeKind::Categorical { values: vb },
                            ) => va == vb,
                            (AttributeKind::Continuous { .. }, AttributeKind::Continuous { .. }) => {
                                true
                            }
                            _ => false,
                        }
                })
    }
}

/// One cell of a record: a categorical value (index into the attribute's
/// universe) or a finite continuous value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Cat(u32),
    Cont(f64),
}

impl Cell {
    pub fn as_cat(&self) -> u32 {
        match self {
            Cell::Cat(v) => *v,
            Cell::Cont(_) => panic!("cell is continuous"),
        }
    }

    pub fn as_cont(&self) -> f64 {
        match self {
            Cell::Cont(v) => *v,
            Cell::Cat(_) => panic!("cell is categorical"),
        }
    }
}

/// A record: F cells positionally aligned with the schema.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub cells: Vec<Cell>,
}

impl Record {
    pub fn new(cells: Vec<Cell>) -> Self {
        Self { cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Validate the record against a schema.
    pub fn conforms_to(&self, schema: &Schema) -> bool {
        self.cells.len() == schema.len()
            && self.cells.iter().enumerate().all(|(i, cell)| match cell {
                Cell::Cat(v) => (*v as usize) < schema.kind(i).universe_size(),
                Cell::Cont(x) => schema.kind(i).is_continuous() && x.is_finite(),
            })
    }
}

/// A validated multiset of records. Immutable after construction; row order
/// is preserved and duplicates are permitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Schema,
    rows: Vec<Record>,
}

impl Dataset {
    /// Build a dataset, validating every row and refreshing the observed
    /// continuous ranges from the rows (when any are present).
    pub fn new(schema: Schema, rows: Vec<Record>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(Error::RowArityMismatch {
                    line: i + 1,
                    expected: schema.len(),
                    found: row.len(),
                });
            }
            if !row.conforms_to(&schema) {
                return Err(Error::SchemaMismatch(format!("row {i} fails validation")));
            }
        }
        let mut dataset = Self { schema, rows };
        dataset.refresh_observed_ranges();
        Ok(dataset)
    }

    fn refresh_observed_ranges(&mut self) {
        if self.rows.is_empty() {
            return;
        }
        for f in 0..self.schema.len() {
            if let AttributeKind::Continuous { .. } = self.schema.kind(f) {
                let mut min = f64::INFINITY;
                let mut max = f64::NEG_INFINITY;
                for row in &self.rows {
                    let v = row.cells[f].as_cont();
                    min = min.min(v);
                    max = max.max(v);
                }
                self.schema.attributes[f].1 = AttributeKind::Continuous {
                    observed_min: min,
                    observed_max: max,
                };
            }
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Record] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &Record {
        &self.rows[index]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Uniform sample of `n` row positions without replacement.
    ///
    /// Duplicate record values may still co-occur because the source is a
    /// multiset. Deterministic given the seed; schema is preserved.
    pub fn sample_rows(&self, n: usize, seed_value: u64) -> Result<Dataset> {
        if n > self.len() {
            return Err(Error::SampleTooLarge {
                requested: n,
                available: self.len(),
            });
        }
        let mut rng = seed::rng(seed_value, &[seed::phase::PARTITION, 0]);
        let mut picked: Vec<usize> = index_sample(&mut rng, self.len(), n).into_vec();
        picked.sort_unstable();
        let rows = picked.iter().map(|&i| self.rows[i].clone()).collect();
        Dataset::new(self.schema.clone(), rows)
    }

    /// Random disjoint split into (aux, test) by row position.
    pub fn partition(&self, n_aux: usize, n_test: usize, seed_value: u64) -> Result<(Dataset, Dataset)> {
        let total = n_aux + n_test;
        if total > self.len() {
            return Err(Error::SampleTooLarge {
                requested: total,
                available: self.len(),
            });
        }
        let mut rng = seed::rng(seed_value, &[seed::phase::PARTITION, 1]);
        let picked: Vec<usize> = index_sample(&mut rng, self.len(), total).into_vec();
        let mut aux_idx: Vec<usize> = picked[..n_aux].to_vec();
        let mut test_idx: Vec<usize> = picked[n_aux..].to_vec();
        aux_idx.sort_unstable();
        test_idx.sort_unstable();
        let aux = Dataset::new(
            self.schema.clone(),
            aux_idx.iter().map(|&i| self.rows[i].clone()).collect(),
        )?;
        let test = Dataset::new(
            self.schema.clone(),
            test_idx.iter().map(|&i| self.rows[i].clone()).collect(),
        )?;
        Ok((aux, test))
    }

    /// Render one row in data-file syntax.
    pub fn format_row(&self, index: usize) -> String {
        let row = &self.rows[index];
        let mut out = String::new();
        for (f, cell) in row.cells.iter().enumerate() {
            if f > 0 {
                out.push(',');
            }
            match cell {
                Cell::Cat(v) => out.push_str(self.schema.symbol(f, *v)),
                Cell::Cont(x) => {
                    out.push_str(&format_cont(*x));
                }
            }
        }
        out
    }
}

/// Shortest decimal form that parses back to the same f64.
fn format_cont(x: f64) -> String {
    let mut s = format!("{x}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

// --- schema file -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SchemaFile {
    attributes: Vec<SchemaFileAttribute>,
}

#[derive(Serialize, Deserialize)]
struct SchemaFileAttribute {
    name: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<String>>,
}

/// Parse a schema from its JSON sidecar text.
pub fn parse_schema(text: &str) -> Result<Schema> {
    let file: SchemaFile =
        serde_json::from_str(text).map_err(|e| Error::SchemaParseError(e.to_string()))?;
    let mut attributes = Vec::with_capacity(file.attributes.len());
    for attr in file.attributes {
        let kind = match attr.kind.as_str() {
            "categorical" => {
                let values = attr.values.ok_or_else(|| {
                    Error::SchemaParseError(format!(
                        "categorical attribute {:?} is missing its value list",
                        attr.name
                    ))
                })?;
                AttributeKind::Categorical { values }
            }
            "continuous" => AttributeKind::Continuous {
                observed_min: 0.0,
                observed_max: 0.0,
            },
            other => {
                return Err(Error::SchemaParseError(format!(
                    "attribute {:?} has unknown kind {other:?}",
                    attr.name
                )))
            }
        };
        attributes.push((attr.name, kind));
    }
    Schema::new(attributes)
}

/// Load a schema from a JSON file.
pub fn load_schema(path: &Path) -> Result<Schema> {
    let text = std::fs::read_to_string(path)
        .map_err(|_| Error::MissingFile(path.display().to_string()))?;
    parse_schema(&text)
}

/// Serialize a schema as JSON sidecar text.
pub fn schema_to_json(schema: &Schema) -> String {
    let file = SchemaFile {
        attributes: schema
            .attributes()
            .iter()
            .map(|(name, kind)| match kind {
                AttributeKind::Categorical { values } => SchemaFileAttribute {
                    name: name.clone(),
                    kind: "categorical".into(),
                    values: Some(values.clone()),
                },
                AttributeKind::Continuous { .. } => SchemaFileAttribute {
                    name: name.clone(),
                    kind: "continuous".into(),
                    values: None,
                },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("schema serializes")
}

// --- data file --------------------------------------------------------------

/// Options for reading a data file.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Skip the first line (column names).
    pub has_header: bool,
}

/// Parse one cell against its schema kind.
fn parse_cell(raw: &str, schema: &Schema, attribute: usize, line: usize) -> Result<Cell> {
    let raw = raw.trim();
    match schema.kind(attribute) {
        AttributeKind::Categorical { values } => values
            .iter()
            .position(|v| v == raw)
            .map(|i| Cell::Cat(i as u32))
            .ok_or_else(|| Error::UnknownCategoryValue {
                line,
                attribute: schema.name(attribute).to_string(),
                value: raw.to_string(),
            }),
        AttributeKind::Continuous { .. } => {
            let value: f64 = raw.parse().map_err(|_| Error::NonNumericContinuous {
                line,
                attribute: schema.name(attribute).to_string(),
                value: raw.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonNumericContinuous {
                    line,
                    attribute: schema.name(attribute).to_string(),
                    value: raw.to_string(),
                });
            }
            Ok(Cell::Cont(value))
        }
    }
}

/// Parse data-file text against a schema. Missing values are rejected: every
/// row must carry exactly F non-empty cells.
pub fn parse_dataset(text: &str, schema: &Schema, options: LoadOptions) -> Result<Dataset> {
    let mut rows = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        if options.has_header && i == 0 {
            continue;
        }
        if raw_line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = raw_line.split(',').collect();
        if cells.len() != schema.len() {
            return Err(Error::RowArityMismatch {
                line,
                expected: schema.len(),
                found: cells.len(),
            });
        }
        let mut record = Vec::with_capacity(schema.len());
        for (f, raw) in cells.iter().enumerate() {
            record.push(parse_cell(raw, schema, f, line)?);
        }
        rows.push(Record::new(record));
    }
    Dataset::new(schema.clone(), rows)
}

/// Load and validate a dataset from a data file plus its schema sidecar.
///
/// The schema file's categorical universes are authoritative: a symbol absent
/// from the universe is an error, never silently added. Continuous observed
/// ranges are recomputed from the loaded rows.
pub fn load_dataset(path: &Path, schema_path: &Path, options: LoadOptions) -> Result<Dataset> {
    let schema = load_schema(schema_path)?;
    let text = std::fs::read_to_string(path)
        .map_err(|_| Error::MissingFile(path.display().to_string()))?;
    parse_dataset(&text, &schema, options)
}

/// Render a dataset in data-file syntax.
pub fn dataset_to_text(dataset: &Dataset, header: bool) -> String {
    let mut out = String::new();
    if header {
        let names: Vec<&str> = (0..dataset.schema().len())
            .map(|i| dataset.schema().name(i))
            .collect();
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for i in 0..dataset.len() {
        out.push_str(&dataset.format_row(i));
        out.push('\n');
    }
    out
}

/// Write a dataset to a data file.
pub fn write_dataset(dataset: &Dataset, path: &Path, header: bool) -> Result<()> {
    std::fs::write(path, dataset_to_text(dataset, header))?;
    Ok(())
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dataset({} rows x {} attributes)", self.len(), self.schema.len())
    }
}
