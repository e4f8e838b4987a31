//! The membership-inference privacy game and shadow-modeling pipeline.
//!
//! For one target record the pipeline builds many labeled worlds: each world
//! samples a training dataset from a source pool, adds either the target (IN)
//! or a random different record (OUT), fits a generator, and releases a
//! synthetic dataset. A meta-classifier trained on shadow worlds is then
//! scored on test worlds and the per-record risk reported as AUC.
//!
//! Worlds are independent work units with per-world derived seeds, so the
//! whole experiment is a pure function of (input data, config, master seed)
//! regardless of worker scheduling.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attention;
use crate::data::{Dataset, Record};
use crate::encoding::{Metric, NormalizationStats};
use crate::error::{Error, Result};
use crate::forest::{predict_scores, train_random_forest, FeatureMatrix, ForestConfig};
use crate::generators::{Generator, GeneratorKind, GeneratorSpec};
use crate::query::{answer_queries, sample_queries};
use crate::seed;
use crate::selection::{
    select_log_likelihood, select_random, select_rare_value, select_top_r, vulnerability_scores,
    SelectionMethod, SelectionResult, DEFAULT_K, DEFAULT_LL_BUCKETS, DEFAULT_RARE_THRESHOLD,
};

/// Which meta-classifier the attack uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    QueryBased,
    TargetAttention,
}

impl AttackKind {
    pub fn name(&self) -> &'static str {
        match self {
            AttackKind::QueryBased => "query_based",
            AttackKind::TargetAttention => "target_attention",
        }
    }
}

/// Privacy-game parameters shared by every world of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    /// Training and synthetic release size: |D| = |D^s|.
    pub dataset_size: usize,
    pub n_shadow: usize,
    pub n_test: usize,
    /// Counting queries per target.
    pub n_queries: usize,
    pub generator: GeneratorSpec,
    pub forest: ForestConfig,
    pub attention: attention::TrainConfig,
    pub master_seed: u64,
}

impl GameConfig {
    /// Deliberately reduced sizes that preserve the protocol while fitting
    /// continuous-integration budgets.
    pub fn desk(generator: GeneratorSpec, master_seed: u64) -> Self {
        Self {
            dataset_size: 100,
            n_shadow: 300,
            n_test: 100,
            n_queries: 2_000,
            generator,
            forest: ForestConfig {
                n_trees: 100,
                max_depth: 6,
                ..ForestConfig::default()
            },
            attention: attention::TrainConfig {
                epochs: 60,
                ..attention::TrainConfig::default()
            },
            master_seed,
        }
    }

    /// Full-scale parameters; hours per record, not meant for CI.
    pub fn paper(generator: GeneratorSpec, master_seed: u64) -> Self {
        Self {
            dataset_size: 1_000,
            n_shadow: 4_000,
            n_test: 200,
            n_queries: 100_000,
            generator,
            forest: ForestConfig::default(),
            attention: attention::TrainConfig::default(),
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n_shadow.is_multiple_of(2) || !self.n_test.is_multiple_of(2) {
            return Err(Error::InvalidConfig(
                "n_shadow and n_test must be even for balanced labels".into(),
            ));
        }
        if self.dataset_size < 2 {
            return Err(Error::InvalidConfig("dataset_size must be >= 2".into()));
        }
        self.generator.validate()
    }
}

/// One labeled world of the game.
#[derive(Debug, Clone)]
pub struct ShadowWorld {
    pub synthetic: Dataset,
    /// 1 = IN (target was in the training data), 0 = OUT.
    pub label: u8,
    pub world_seed: u64,
}

/// Build `n_worlds` labeled worlds from a source pool.
///
/// Rows equal to the target are removed from the pool first. Each world
/// samples `dataset_size` pool positions without replacement: the first
/// `dataset_size - 1` are the base rows, the last supplies the replacement
/// record for OUT worlds. IN worlds append the target instead. Exactly half
/// the worlds carry each label.
pub fn build_worlds(
    source: &Dataset,
    target: &Record,
    n_worlds: usize,
    game: &GameConfig,
    generator: &dyn Generator,
    seed_value: u64,
) -> Result<Vec<ShadowWorld>> {
    if !n_worlds.is_multiple_of(2) {
        return Err(Error::InvalidConfig(
            "world count must be even for balanced labels".into(),
        ));
    }
    let pool: Vec<usize> = (0..source.len())
        .filter(|&i| source.row(i) != target)
        .collect();
    if pool.is_empty() {
        return Err(Error::TargetUbiquitous);
    }
    if pool.len() < game.dataset_size {
        return Err(Error::SourceTooSmall {
            available: pool.len(),
            needed: game.dataset_size,
        });
    }

    let mut labels = vec![1u8; n_worlds / 2];
    labels.extend(vec![0u8; n_worlds / 2]);
    let mut label_rng = seed::rng(seed_value, &[0]);
    labels.shuffle(&mut label_rng);

    (0..n_worlds)
        .into_par_iter()
        .map(|w| {
            let world_seed = seed::derive(seed_value, &[1, w as u64]);
            let mut rng = seed::rng(world_seed, &[2]);
            let picked =
                rand::seq::index::sample(&mut rng, pool.len(), game.dataset_size).into_vec();
            let mut rows: Vec<Record> = picked[..game.dataset_size - 1]
                .iter()
                .map(|&p| source.row(pool[p]).clone())
                .collect();
            if labels[w] == 1 {
                rows.push(target.clone());
            } else {
                rows.push(source.row(pool[picked[game.dataset_size - 1]]).clone());
            }
            let training = Dataset::new(source.schema().clone(), rows)?;
            let synthetic =
                generator.fit_and_generate(&training, game.dataset_size, world_seed)?;
            Ok(ShadowWorld {
                synthetic,
                label: labels[w],
                world_seed,
            })
        })
        .collect()
}

/// Scores, labels, and AUC of one attack evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub scores: Vec<f64>,
    pub labels: Vec<u8>,
    pub auc: f64,
}

/// Rank-based (Mann-Whitney) AUC with half-credit for score ties.
pub fn compute_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    let positives = labels.iter().filter(|&&l| l == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClassLabels);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Average ranks within tie groups.
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j + 2) as f64 / 2.0; // ranks are 1-based
        for &idx in &order[i..=j] {
            if labels[idx] == 1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let p = positives as f64;
    let n = negatives as f64;
    Ok((rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n))
}

/// Query-based attack: one shared query set per target, query answers as
/// features, a random forest as the meta-classifier.
pub fn run_query_attack(
    target: &Record,
    shadow_worlds: &[ShadowWorld],
    test_worlds: &[ShadowWorld],
    game: &GameConfig,
    seed_value: u64,
) -> Result<AttackOutcome> {
    let schema = shadow_worlds
        .first()
        .ok_or(Error::EmptyFeatures)?
        .synthetic
        .schema();
    let query_set = sample_queries(
        schema,
        target,
        game.n_queries,
        seed::derive(seed_value, &[seed::phase::QUERIES]),
    )?;

    let extract = |worlds: &[ShadowWorld]| -> Result<FeatureMatrix> {
        let rows: Vec<Vec<f64>> = worlds
            .par_iter()
            .map(|w| {
                let counts = answer_queries(&w.synthetic, &query_set)?;
                Ok(counts.into_iter().map(f64::from).collect())
            })
            .collect::<Result<_>>()?;
        FeatureMatrix::from_rows(&rows)
    };

    let shadow_features = extract(shadow_worlds)?;
    let shadow_labels: Vec<u8> = shadow_worlds.iter().map(|w| w.label).collect();
    let model = train_random_forest(
        &shadow_features,
        &shadow_labels,
        &game.forest,
        seed::derive(seed_value, &[seed::phase::FOREST]),
    )?;

    let test_features = extract(test_worlds)?;
    let labels: Vec<u8> = test_worlds.iter().map(|w| w.label).collect();
    let scores = predict_scores(&model, &test_features)?;
    let auc = compute_auc(&scores, &labels)?;
    Ok(AttackOutcome {
        scores,
        labels,
        auc,
    })
}

/// Target-attention attack over the same world layout.
///
/// Preprocessing normalizes with the attacker's auxiliary stats so shadow and
/// test worlds share one feature space.
pub fn run_attention_attack(
    target: &Record,
    shadow_worlds: &[ShadowWorld],
    test_worlds: &[ShadowWorld],
    stats: &NormalizationStats,
    game: &GameConfig,
    seed_value: u64,
) -> Result<AttackOutcome> {
    let schema = shadow_worlds
        .first()
        .ok_or(Error::EmptyFeatures)?
        .synthetic
        .schema()
        .clone();
    let config = &game.attention;

    let preprocess = |worlds: &[ShadowWorld]| -> Result<Vec<attention::LabeledWorld>> {
        worlds
            .par_iter()
            .map(|w| {
                let (pre, _) =
                    attention::preprocess_topx(&w.synthetic, target, config.top_x, &schema, stats)?;
                Ok(attention::LabeledWorld {
                    pre,
                    label: w.label,
                })
            })
            .collect()
    };

    let shadow = preprocess(shadow_worlds)?;
    let (_, target_row) = attention::preprocess_topx(
        &shadow_worlds[0].synthetic,
        target,
        config.top_x,
        &schema,
        stats,
    )?;
    let params = attention::train(
        &shadow,
        &target_row,
        config,
        seed::derive(seed_value, &[seed::phase::ATTENTION]),
    )?;

    let test = preprocess(test_worlds)?;
    let scores: Vec<f64> = test
        .iter()
        .map(|w| attention::score(&params, &w.pre, &target_row))
        .collect::<Result<_>>()?;
    let labels: Vec<u8> = test_worlds.iter().map(|w| w.label).collect();
    let auc = compute_auc(&scores, &labels)?;
    Ok(AttackOutcome {
        scores,
        labels,
        auc,
    })
}

/// Target-selection parameters of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionPlan {
    pub methods: Vec<SelectionMethod>,
    /// Records per method.
    pub r: usize,
    /// Neighbor count for the vulnerability score.
    pub k: usize,
    pub metric: String,
    pub rare_threshold: f64,
    pub ll_buckets: usize,
}

impl Default for SelectionPlan {
    fn default() -> Self {
        Self {
            methods: vec![
                SelectionMethod::Distance,
                SelectionMethod::Random,
                SelectionMethod::RareValue,
                SelectionMethod::LogLikelihood,
            ],
            r: 10,
            k: DEFAULT_K,
            metric: "cosine".into(),
            rare_threshold: DEFAULT_RARE_THRESHOLD,
            ll_buckets: DEFAULT_LL_BUCKETS,
        }
    }
}

impl SelectionPlan {
    pub fn run_method(
        &self,
        omega: &Dataset,
        method: SelectionMethod,
        seed_value: u64,
    ) -> Result<SelectionResult> {
        match method {
            SelectionMethod::Distance => {
                let metric = Metric::parse(&self.metric)?;
                let ranking = vulnerability_scores(omega, self.k, metric)?;
                let mut result = select_top_r(&ranking, self.r, seed_value)?;
                result.method = SelectionMethod::Distance;
                Ok(result)
            }
            SelectionMethod::Random => select_random(omega, self.r, seed_value),
            SelectionMethod::RareValue => {
                select_rare_value(omega, self.r, self.rare_threshold, seed_value)
            }
            SelectionMethod::LogLikelihood => {
                select_log_likelihood(omega, self.r, self.ll_buckets)
            }
        }
    }
}

/// Per-record, per-method, per-attack result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackResult {
    pub target_row: usize,
    pub method: SelectionMethod,
    pub attack: AttackKind,
    pub outcome: AttackOutcome,
}

/// Mean and standard deviation of AUC for one (method, attack) group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: SelectionMethod,
    pub attack: AttackKind,
    pub mean_auc: f64,
    pub std_auc: f64,
    pub n_records: usize,
}

pub fn summarize(results: &[AttackResult]) -> Vec<MethodSummary> {
    let mut groups: Vec<(SelectionMethod, AttackKind, Vec<f64>)> = Vec::new();
    for r in results {
        match groups
            .iter_mut()
            .find(|(m, a, _)| *m == r.method && *a == r.attack)
        {
            Some((_, _, aucs)) => aucs.push(r.outcome.auc),
            None => groups.push((r.method, r.attack, vec![r.outcome.auc])),
        }
    }
    groups
        .into_iter()
        .map(|(method, attack, aucs)| {
            let n = aucs.len() as f64;
            let mean = aucs.iter().sum::<f64>() / n;
            let var = aucs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n;
            MethodSummary {
                method,
                attack,
                mean_auc: mean,
                std_auc: var.sqrt(),
                n_records: aucs.len(),
            }
        })
        .collect()
}

/// Full experiment output: every per-record result plus group summaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub results: Vec<AttackResult>,
    pub summaries: Vec<MethodSummary>,
    /// Row indices selected per method, in method order.
    pub selections: Vec<(SelectionMethod, Vec<usize>)>,
}

/// Run the full per-record experiment: partition, select targets, play the
/// game per (record, attack kind).
pub fn run_record_experiment(
    omega: &Dataset,
    partition: (usize, usize),
    plan: &SelectionPlan,
    attacks: &[AttackKind],
    game: &GameConfig,
) -> Result<ExperimentOutcome> {
    game.validate()?;
    let master = game.master_seed;
    let (aux, test_src) = omega.partition(
        partition.0,
        partition.1,
        seed::derive(master, &[seed::phase::PARTITION]),
    )?;
    let aux_stats = NormalizationStats::from_dataset(&aux);

    let mut selections = Vec::new();
    for (mi, &method) in plan.methods.iter().enumerate() {
        let sel = plan.run_method(
            omega,
            method,
            seed::derive(master, &[seed::phase::SELECTION, mi as u64]),
        )?;
        selections.push((method, sel.selected.clone()));
    }

    let mut results = Vec::new();
    for (method, rows) in &selections {
        for (ti, &target_row) in rows.iter().enumerate() {
            let target = omega.row(target_row).clone();
            let tag = seed::derive(master, &[*method as u64, ti as u64]);
            let shadow = build_worlds(
                &aux,
                &target,
                game.n_shadow,
                game,
                &game.generator,
                seed::derive(tag, &[seed::phase::SHADOW_WORLDS]),
            )?;
            let test = build_worlds(
                &test_src,
                &target,
                game.n_test,
                game,
                &game.generator,
                seed::derive(tag, &[seed::phase::TEST_WORLDS]),
            )?;
            for &attack in attacks {
                let attack_seed = seed::derive(tag, &[attack as u64]);
                let outcome = match attack {
                    AttackKind::QueryBased => {
                        run_query_attack(&target, &shadow, &test, game, attack_seed)?
                    }
                    AttackKind::TargetAttention => run_attention_attack(
                        &target,
                        &shadow,
                        &test,
                        &aux_stats,
                        game,
                        attack_seed,
                    )?,
                };
                results.push(AttackResult {
                    target_row,
                    method: *method,
                    attack,
                    outcome,
                });
            }
        }
    }
    let summaries = summarize(&results);
    Ok(ExperimentOutcome {
        results,
        summaries,
        selections,
    })
}

/// One epsilon point of a differential-privacy sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Swept parameter value; infinity maps the generator to the non-private
    /// network.
    pub value: f64,
    pub outcome: ExperimentOutcome,
}

/// Run the record experiment across a list of privacy budgets; `inf` entries
/// fall back to the non-private network generator.
pub fn dp_sweep(
    omega: &Dataset,
    partition: (usize, usize),
    plan: &SelectionPlan,
    attacks: &[AttackKind],
    game: &GameConfig,
    epsilons: &[f64],
) -> Result<Vec<SweepPoint>> {
    let mut points = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let mut game_at = game.clone();
        let mut g = game.generator.clone();
        if eps.is_infinite() {
            // Same discretization and parent cap, minus the noise.
            g.kind = GeneratorKind::Baynet;
            g.epsilon = None;
        } else {
            g.kind = GeneratorKind::Privbayes;
            g.epsilon = Some(eps);
        }
        game_at.generator = g;
        let outcome = run_record_experiment(omega, partition, plan, attacks, &game_at)?;
        points.push(SweepPoint {
            value: eps,
            outcome,
        });
    }
    Ok(points)
}

/// Full-scale reference results (4000 shadow worlds per record, |D| = 1000,
/// 100k queries, 10 records per method). Desk-scale runs reproduce the
/// ordering and gaps directionally, not these absolute values; they are kept
/// as metadata for comparisons, never as test gates.
pub mod reference {
    /// Mean AUC of the query-based attack on distance-selected records.
    pub const QUERY_DISTANCE_CENSUS_SYNTHPOP: f64 = 0.879;
    pub const QUERY_DISTANCE_CENSUS_BAYNET: f64 = 0.858;
    pub const QUERY_DISTANCE_ADULT_SYNTHPOP: f64 = 0.804;
    pub const QUERY_DISTANCE_ADULT_BAYNET: f64 = 0.810;
    /// Mean AUC of the target-attention attack on distance-selected records.
    pub const ATTENTION_DISTANCE_CENSUS_SYNTHPOP: f64 = 0.838;
}

/// Convenience used by sweeps over k and over the distance metric: rerun the
/// experiment with a modified selection plan.
pub fn selection_sweep(
    omega: &Dataset,
    partition: (usize, usize),
    plans: &[(f64, SelectionPlan)],
    attacks: &[AttackKind],
    game: &GameConfig,
) -> Result<Vec<SweepPoint>> {
    plans
        .iter()
        .map(|(value, plan)| {
            let outcome = run_record_experiment(omega, partition, plan, attacks, game)?;
            Ok(SweepPoint {
                value: *value,
                outcome,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;

    fn tiny_game(seed_value: u64) -> GameConfig {
        let mut game = GameConfig::desk(GeneratorSpec::baynet(2), seed_value);
        game.dataset_size = 40;
        game.n_shadow = 40;
        game.n_test = 20;
        game.n_queries = 200;
        game.forest.n_trees = 30;
        game.forest.max_depth = 4;
        game
    }

    #[test]
    fn auc_perfect_ranking() {
        let auc = compute_auc(&[0.9, 0.8, 0.2, 0.1], &[1, 1, 0, 0]).unwrap();
        assert_eq!(auc, 1.0);
    }

    #[test]
    fn auc_all_ties_is_half() {
        let auc = compute_auc(&[0.5, 0.5, 0.5, 0.5], &[1, 1, 0, 0]).unwrap();
        assert_eq!(auc, 0.5);
    }

    #[test]
    fn auc_hand_enumerated_pairs() {
        // pairs: (0.1 vs 0.2) lose, (0.1 vs 0.8) lose, (0.9 vs 0.2) win,
        // (0.9 vs 0.8) win -> 2/4
        let auc = compute_auc(&[0.1, 0.9, 0.2, 0.8], &[1, 1, 0, 0]).unwrap();
        assert_eq!(auc, 0.5);
    }

    #[test]
    fn auc_rejects_degenerate_inputs() {
        assert!(matches!(
            compute_auc(&[0.1, 0.2], &[1, 1]),
            Err(Error::SingleClassLabels)
        ));
        assert!(matches!(
            compute_auc(&[0.1], &[1, 0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn worlds_are_balanced_and_sized() {
        let source = demo::sample_population(200, 1);
        let target = source.row(3).clone();
        let game = tiny_game(0);
        let worlds = build_worlds(&source, &target, 8, &game, &game.generator, 5).unwrap();
        assert_eq!(worlds.len(), 8);
        let ins = worlds.iter().filter(|w| w.label == 1).count();
        assert_eq!(ins, 4);
        for w in &worlds {
            assert_eq!(w.synthetic.len(), game.dataset_size);
        }
    }

    #[test]
    fn worlds_are_deterministic() {
        let source = demo::sample_population(150, 2);
        let target = source.row(0).clone();
        let game = tiny_game(1);
        let a = build_worlds(&source, &target, 4, &game, &game.generator, 9).unwrap();
        let b = build_worlds(&source, &target, 4, &game, &game.generator, 9).unwrap();
        for (wa, wb) in a.iter().zip(&b) {
            assert_eq!(wa.label, wb.label);
            assert_eq!(wa.synthetic, wb.synthetic);
        }
    }

    /// Stub generator whose output ignores its training data.
    pub struct NullGenerator {
        pub frozen: Dataset,
    }

    impl Generator for NullGenerator {
        fn fit_and_generate(&self, _training: &Dataset, m: usize, seed_value: u64) -> Result<Dataset> {
            self.frozen.sample_rows(m.min(self.frozen.len()), seed_value)
        }

        fn label(&self) -> String {
            "null".into()
        }
    }

    #[test]
    fn null_generator_attack_has_no_signal() {
        let source = demo::sample_population(300, 3);
        let frozen = demo::sample_population(200, 999);
        let stub = NullGenerator { frozen };
        let target = source.row(1).clone();
        let mut game = tiny_game(2);
        game.n_shadow = 60;
        game.n_test = 200;
        let shadow = build_worlds(&source, &target, game.n_shadow, &game, &stub, 11).unwrap();
        let test = build_worlds(&source, &target, game.n_test, &game, &stub, 12).unwrap();
        let outcome = run_query_attack(&target, &shadow, &test, &game, 13).unwrap();
        assert!(
            (0.4..=0.6).contains(&outcome.auc),
            "no-signal AUC {}",
            outcome.auc
        );
    }

    #[test]
    fn experiment_cardinality_matches_plan() {
        let omega = demo::sample_population(400, 4);
        let plan = SelectionPlan {
            methods: vec![SelectionMethod::Random],
            r: 1,
            ..Default::default()
        };
        let game = tiny_game(3);
        let outcome = run_record_experiment(
            &omega,
            (200, 100),
            &plan,
            &[AttackKind::QueryBased],
            &game,
        )
        .unwrap();
        assert_eq!(outcome.results.len(), 1);
        assert_eq!(outcome.summaries.len(), 1);
        assert_eq!(outcome.results[0].outcome.scores.len(), game.n_test);
    }

    #[test]
    fn empty_epsilon_sweep_is_empty() {
        let omega = demo::sample_population(200, 5);
        let plan = SelectionPlan {
            methods: vec![SelectionMethod::Random],
            r: 1,
            ..Default::default()
        };
        let mut game = tiny_game(4);
        game.generator = GeneratorSpec::privbayes(2, 1.0);
        let points = dp_sweep(
            &omega,
            (100, 50),
            &plan,
            &[AttackKind::QueryBased],
            &game,
            &[],
        )
        .unwrap();
        assert!(points.is_empty());
    }

    #[test]
    fn sweep_infinity_maps_to_plain_network() {
        let omega = demo::sample_population(220, 6);
        let plan = SelectionPlan {
            methods: vec![SelectionMethod::Random],
            r: 1,
            ..Default::default()
        };
        let mut game = tiny_game(5);
        game.generator = GeneratorSpec::privbayes(2, 1.0);
        let points = dp_sweep(
            &omega,
            (120, 60),
            &plan,
            &[AttackKind::QueryBased],
            &game,
            &[f64::INFINITY],
        )
        .unwrap();
        assert_eq!(points.len(), 1);
        // Identical to running the non-private generator directly.
        let mut direct_game = game.clone();
        direct_game.generator = GeneratorSpec::baynet(2);
        let direct = run_record_experiment(
            &omega,
            (120, 60),
            &plan,
            &[AttackKind::QueryBased],
            &direct_game,
        )
        .unwrap();
        assert_eq!(
            points[0].outcome.results[0].outcome.auc,
            direct.results[0].outcome.auc
        );
    }

    #[test]
    fn out_worlds_never_contain_the_target() {
        let source = demo::sample_population(120, 7);
        let target = source.row(2).clone();
        let game = tiny_game(6);

        // Capture the training datasets with a generator that echoes them.
        struct Echo;
        impl Generator for Echo {
            fn fit_and_generate(&self, training: &Dataset, _m: usize, _seed: u64) -> Result<Dataset> {
                Ok(training.clone())
            }
            fn label(&self) -> String {
                "echo".into()
            }
        }
        let worlds = build_worlds(&source, &target, 10, &game, &Echo, 3).unwrap();
        for w in &worlds {
            let contains = w.synthetic.rows().iter().any(|r| r == &target);
            if w.label == 0 {
                assert!(!contains, "OUT world must exclude the target");
            } else {
                assert!(contains, "IN world must include the target");
            }
        }
    }

    #[test]
    fn experiment_is_reproducible() {
        let omega = demo::sample_population(300, 8);
        let plan = SelectionPlan {
            methods: vec![SelectionMethod::Distance, SelectionMethod::Random],
            r: 1,
            ..Default::default()
        };
        let game = tiny_game(7);
        let run = || {
            run_record_experiment(&omega, (150, 80), &plan, &[AttackKind::QueryBased], &game)
                .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.results.len(), b.results.len());
        for (ra, rb) in a.results.iter().zip(&b.results) {
            assert_eq!(ra.outcome.scores, rb.outcome.scores);
            assert_eq!(ra.outcome.auc, rb.outcome.auc);
        }
    }
}
