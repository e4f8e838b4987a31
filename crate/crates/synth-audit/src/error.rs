//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by loading, scoring, generation, and attack stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    MissingFile(String),

    #[error("schema parse error: {0}")]
    SchemaParseError(String),

    #[error("line {line}: expected {expected} cells, found {found}")]
    RowArityMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: value {value:?} is not in the universe of attribute {attribute:?}")]
    UnknownCategoryValue {
        line: usize,
        attribute: String,
        value: String,
    },

    #[error("line {line}: attribute {attribute:?} expects a finite number, found {value:?}")]
    NonNumericContinuous {
        line: usize,
        attribute: String,
        value: String,
    },

    #[error("cannot sample {requested} rows from a dataset of {available}")]
    SampleTooLarge { requested: usize, available: usize },

    #[error("record does not conform to the schema: {0}")]
    SchemaMismatch(String),

    #[error("encoded records come from different schema/normalization fingerprints")]
    FingerprintMismatch,

    #[error("Minkowski order must be >= 1, got {0}")]
    InvalidOrder(u32),

    #[error("k = {k} exceeds the {max} other rows available per record")]
    KTooLarge { k: usize, max: usize },

    #[error("R = {r} exceeds the {available} selectable rows")]
    RTooLarge { r: usize, available: usize },

    #[error("only {qualifying} records qualify, {requested} requested")]
    NotEnoughQualifyingRecords { qualifying: usize, requested: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid generator configuration: {0}")]
    InvalidGeneratorSpec(String),

    #[error("training labels contain a single class")]
    SingleClassTraining,

    #[error("feature matrix is empty")]
    EmptyFeatures,

    #[error("probe has {found} features, model was trained with {expected}")]
    FeatureArityMismatch { expected: usize, found: usize },

    #[error("AUC requires both positive and negative labels")]
    SingleClassLabels,

    #[error("scores and labels differ in length: {scores} vs {labels}")]
    LengthMismatch { scores: usize, labels: usize },

    #[error("source dataset has {available} usable rows, {needed} needed")]
    SourceTooSmall { available: usize, needed: usize },

    #[error("every source row equals the target; no candidate replacement record")]
    TargetUbiquitous,

    #[error("synthetic dataset is empty")]
    EmptySynthetic,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
