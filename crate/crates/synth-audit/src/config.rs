//! Experiment configuration files.
//!
//! A config names the input data (files or the built-in demo population),
//! partition sizes, game preset with optional overrides, generator, selection
//! plan, attack kinds, and optional sweep values. The master seed is not part
//! of the file: experiment commands require an explicit `--seed`.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::attack::{AttackKind, GameConfig, SelectionPlan};
use crate::data::{load_dataset, Dataset, LoadOptions};
use crate::demo;
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    #[default]
    Desk,
    Paper,
}

/// Where the population comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DataSource {
    /// Comma-separated data file plus schema sidecar.
    Files {
        data: PathBuf,
        schema: PathBuf,
        #[serde(default)]
        has_header: bool,
    },
    /// Built-in ground-truth population with this many rows.
    Demo { demo_rows: usize },
}

/// Per-field overrides of the preset game parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GameOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_shadow: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_test: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_queries: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forest_trees: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forest_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attention_epochs: Option<usize>,
}

/// Sweep request: which parameter to iterate and its values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SweepSpec {
    /// Privacy budgets; the strings allow "inf" for the non-private network.
    Epsilon { values: Vec<EpsilonValue> },
    /// Neighbor counts for the vulnerability score.
    K { values: Vec<usize> },
    /// Distance metric identifiers (`cosine`, `minkowski-p2`, ...).
    Metric { values: Vec<String> },
}

/// Epsilon that may be the string "inf".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonValue {
    Number(f64),
    Text(String),
}

impl EpsilonValue {
    pub fn as_f64(&self) -> Result<f64> {
        match self {
            EpsilonValue::Number(x) => Ok(*x),
            EpsilonValue::Text(s) if s == "inf" => Ok(f64::INFINITY),
            EpsilonValue::Text(s) => s
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad epsilon {s:?}"))),
        }
    }
}

/// Partition sizes for the auxiliary/test split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub n_aux: usize,
    pub n_test: usize,
}

/// The experiment config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub source: DataSource,
    pub partition: PartitionSpec,
    #[serde(default)]
    pub preset: Preset,
    pub generator: GeneratorSpec,
    #[serde(default)]
    pub selection: SelectionPlan,
    #[serde(default = "default_attacks")]
    pub attacks: Vec<AttackKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub overrides: GameOverrides,
}

fn default_attacks() -> Vec<AttackKind> {
    vec![AttackKind::QueryBased]
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|_| Error::MissingFile(path.display().to_string()))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        if self.selection.methods.is_empty() {
            return Err(Error::InvalidConfig("no selection methods".into()));
        }
        if self.selection.r == 0 {
            return Err(Error::InvalidConfig("selection.r must be >= 1".into()));
        }
        if self.attacks.is_empty() {
            return Err(Error::InvalidConfig("no attack kinds".into()));
        }
        if let Some(sweep) = &self.sweep {
            let empty = match sweep {
                SweepSpec::Epsilon { values } => values.is_empty(),
                SweepSpec::K { values } => values.is_empty(),
                SweepSpec::Metric { values } => values.is_empty(),
            };
            if empty {
                return Err(Error::InvalidConfig("sweep has no values".into()));
            }
        }
        Ok(())
    }

    /// Load the population named by the config.
    pub fn load_population(&self, seed_value: u64) -> Result<Dataset> {
        match &self.source {
            DataSource::Files {
                data,
                schema,
                has_header,
            } => load_dataset(
                data,
                schema,
                LoadOptions {
                    has_header: *has_header,
                },
            ),
            DataSource::Demo { demo_rows } => Ok(demo::sample_population(*demo_rows, seed_value)),
        }
    }

    /// Resolve the preset plus overrides into a concrete game config.
    pub fn game(&self, master_seed: u64) -> Result<GameConfig> {
        let mut game = match self.preset {
            Preset::Desk => GameConfig::desk(self.generator.clone(), master_seed),
            Preset::Paper => GameConfig::paper(self.generator.clone(), master_seed),
        };
        let o = &self.overrides;
        if let Some(v) = o.dataset_size {
            game.dataset_size = v;
        }
        if let Some(v) = o.n_shadow {
            game.n_shadow = v;
        }
        if let Some(v) = o.n_test {
            game.n_test = v;
        }
        if let Some(v) = o.n_queries {
            game.n_queries = v;
        }
        if let Some(v) = o.forest_trees {
            game.forest.n_trees = v;
        }
        if let Some(v) = o.forest_depth {
            game.forest.max_depth = v;
        }
        if let Some(v) = o.attention_epochs {
            game.attention.epochs = v;
        }
        game.validate()?;
        Ok(game)
    }

    /// Resolved configuration echoed into reports, master seed included.
    pub fn echo(&self, master_seed: u64) -> Result<serde_json::Value> {
        let game = self.game(master_seed)?;
        Ok(serde_json::json!({
            "config": self,
            "resolved_game": game,
            "master_seed": master_seed,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEMO_CONFIG: &str = r#"{
        "demo_rows": 2000,
        "partition": {"n_aux": 1000, "n_test": 500},
        "preset": "desk",
        "generator": {"kind": "baynet", "max_parents": 2}
    }"#;

    #[test]
    fn demo_config_parses_with_defaults() {
        let config = ExperimentConfig::parse(DEMO_CONFIG).unwrap();
        assert_eq!(config.preset, Preset::Desk);
        assert_eq!(config.attacks, vec![AttackKind::QueryBased]);
        assert_eq!(config.selection.r, 10);
        let game = config.game(7).unwrap();
        assert_eq!(game.dataset_size, 100);
        assert_eq!(game.master_seed, 7);
    }

    #[test]
    fn file_source_parses() {
        let text = r#"{
            "data": "pop.csv",
            "schema": "pop.schema.json",
            "has_header": true,
            "partition": {"n_aux": 10, "n_test": 5},
            "generator": {"kind": "synthpop"}
        }"#;
        let config = ExperimentConfig::parse(text).unwrap();
        match &config.source {
            DataSource::Files { has_header, .. } => assert!(has_header),
            _ => panic!("expected file source"),
        }
    }

    #[test]
    fn odd_shadow_count_rejected() {
        let text = r#"{
            "demo_rows": 100,
            "partition": {"n_aux": 50, "n_test": 25},
            "generator": {"kind": "baynet"},
            "overrides": {"n_shadow": 31}
        }"#;
        let config = ExperimentConfig::parse(text).unwrap();
        assert!(matches!(config.game(0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn epsilon_sweep_accepts_inf() {
        let text = r#"{
            "demo_rows": 100,
            "partition": {"n_aux": 50, "n_test": 25},
            "generator": {"kind": "privbayes", "epsilon": 10.0},
            "sweep": {"kind": "epsilon", "values": [1, 10, "inf"]}
        }"#;
        let config = ExperimentConfig::parse(text).unwrap();
        match config.sweep.unwrap() {
            SweepSpec::Epsilon { values } => {
                let parsed: Vec<f64> = values.iter().map(|v| v.as_f64().unwrap()).collect();
                assert_eq!(parsed[0], 1.0);
                assert!(parsed[2].is_infinite());
            }
            _ => panic!("expected epsilon sweep"),
        }
    }

    #[test]
    fn empty_sweep_rejected() {
        let text = r#"{
            "demo_rows": 100,
            "partition": {"n_aux": 50, "n_test": 25},
            "generator": {"kind": "baynet"},
            "sweep": {"kind": "k", "values": []}
        }"#;
        assert!(matches!(
            ExperimentConfig::parse(text),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn config_round_trips() {
        let config = ExperimentConfig::parse(DEMO_CONFIG).unwrap();
        let text = serde_json::to_string(&config).unwrap();
        let back = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(config, back);
    }
}
