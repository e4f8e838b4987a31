//! Fit-and-sample synthetic data generators.
//!
//! Three built-in generators: a sequential CART synthesizer, a greedy
//! Bayesian-network synthesizer, and its differentially private variant.
//! The attack pipeline talks to generators through the [`Generator`] trait,
//! which couples fitting and sampling into one seeded step per shadow world.

mod bayes;
mod cart;

pub use bayes::{fit_baynet, fit_privbayes, BayesNetModel, ContinuousBins, NodeModel};
pub use cart::{fit_synthpop, CartConfig, CartModel};

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Which generator family to instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Synthpop,
    Baynet,
    Privbayes,
}

/// Generator family plus hyperparameters, as written in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    /// Parent cap for the Bayesian-network generators.
    #[serde(default = "default_max_parents")]
    pub max_parents: usize,
    /// Equal-width bin count for continuous attributes in the network
    /// generators.
    #[serde(default = "default_bins")]
    pub bins: usize,
    /// Total privacy budget (privbayes only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Fraction of the budget spent on structure learning (privbayes only).
    #[serde(default = "default_epsilon_split")]
    pub epsilon_split: f64,
    /// Score sensitivity for the structure step; `None` uses 2/|D|.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mi_sensitivity: Option<f64>,
    #[serde(default)]
    pub cart: CartConfig,
}

fn default_max_parents() -> usize {
    2
}

fn default_bins() -> usize {
    20
}

fn default_epsilon_split() -> f64 {
    0.5
}

impl GeneratorSpec {
    pub fn synthpop() -> Self {
        Self {
            kind: GeneratorKind::Synthpop,
            ..Self::baynet(2)
        }
    }

    pub fn baynet(max_parents: usize) -> Self {
        Self {
            kind: GeneratorKind::Baynet,
            max_parents,
            bins: default_bins(),
            epsilon: None,
            epsilon_split: default_epsilon_split(),
            mi_sensitivity: None,
            cart: CartConfig::default(),
        }
    }

    pub fn privbayes(max_parents: usize, epsilon: f64) -> Self {
        Self {
            kind: GeneratorKind::Privbayes,
            epsilon: Some(epsilon),
            ..Self::baynet(max_parents)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_parents == 0 {
            return Err(Error::InvalidGeneratorSpec("max_parents must be >= 1".into()));
        }
        if self.bins == 0 {
            return Err(Error::InvalidGeneratorSpec("bins must be >= 1".into()));
        }
        if self.kind == GeneratorKind::Privbayes {
            let epsilon = self
                .epsilon
                .ok_or_else(|| Error::InvalidGeneratorSpec("privbayes requires epsilon".into()))?;
            if epsilon.is_nan() || epsilon <= 0.0 || !epsilon.is_finite() {
                return Err(Error::InvalidEpsilon(epsilon));
            }
            if !(self.epsilon_split > 0.0 && self.epsilon_split < 1.0) {
                return Err(Error::InvalidGeneratorSpec(
                    "epsilon_split must lie in (0, 1)".into(),
                ));
            }
        }
        self.cart.validate()?;
        Ok(())
    }

    pub fn name(&self) -> String {
        match self.kind {
            GeneratorKind::Synthpop => "synthpop".into(),
            GeneratorKind::Baynet => "baynet".into(),
            GeneratorKind::Privbayes => {
                format!("privbayes(eps={})", self.epsilon.unwrap_or(f64::NAN))
            }
        }
    }
}

/// One fitted generator instance.
#[derive(Debug, Clone)]
pub enum FittedModel {
    BayesNet(BayesNetModel),
    Cart(CartModel),
}

impl FittedModel {
    /// Draw `m` i.i.d. synthetic records conforming to the training schema.
    pub fn generate(&self, m: usize, seed: u64) -> Dataset {
        match self {
            FittedModel::BayesNet(model) => model.sample(m, seed),
            FittedModel::Cart(model) => model.sample(m, seed),
        }
    }
}

/// Fit a generator spec on a training dataset.
pub fn fit(spec: &GeneratorSpec, training: &Dataset, seed: u64) -> Result<FittedModel> {
    spec.validate()?;
    match spec.kind {
        GeneratorKind::Synthpop => Ok(FittedModel::Cart(fit_synthpop(training, &spec.cart, seed)?)),
        GeneratorKind::Baynet => Ok(FittedModel::BayesNet(fit_baynet(
            training,
            spec.max_parents,
            spec.bins,
            seed,
        )?)),
        GeneratorKind::Privbayes => Ok(FittedModel::BayesNet(fit_privbayes(
            training,
            spec.epsilon.expect("validated"),
            spec.epsilon_split,
            spec.max_parents,
            spec.bins,
            spec.mi_sensitivity,
            seed,
        )?)),
    }
}

/// A randomized map from a private dataset to a synthetic one. The attack
/// pipeline fits one instance per shadow world; implementations must be pure
/// functions of `(training, m, seed)`.
pub trait Generator: Sync {
    fn fit_and_generate(&self, training: &Dataset, m: usize, seed: u64) -> Result<Dataset>;

    fn label(&self) -> String;
}

impl Generator for GeneratorSpec {
    fn fit_and_generate(&self, training: &Dataset, m: usize, seed: u64) -> Result<Dataset> {
        let model = fit(self, training, seed)?;
        Ok(model.generate(m, seed))
    }

    fn label(&self) -> String {
        self.name()
    }
}
