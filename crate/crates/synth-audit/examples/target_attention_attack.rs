//! The record-level neural attack on the same small game as `query_attack`.
//!
//! Instead of hand-picked counting-query features, the target-attention model
//! reads the synthetic dataset directly: unique records with multiplicity and
//! distance-to-target, attended against the target's embedding.
//!
//! Run with: `cargo run --release --example target_attention_attack`

use synth_audit::attack::{build_worlds, run_attention_attack, run_query_attack, GameConfig};
use synth_audit::demo;
use synth_audit::encoding::{Metric, NormalizationStats};
use synth_audit::generators::GeneratorSpec;
use synth_audit::selection::vulnerability_scores;

fn main() -> synth_audit::Result<()> {
    let population = demo::sample_population(2_000, 5);
    let (aux, test_src) = population.partition(1_200, 700, 6)?;

    // The CART synthesizer bootstraps observed rows into its output, which
    // gives the record-level model close neighbors to attend to.
    let mut game = GameConfig::desk(GeneratorSpec::synthpop(), 7);
    game.dataset_size = 60;
    game.n_shadow = 300;
    game.n_test = 60;
    game.n_queries = 500;
    game.attention.epochs = 120;
    game.attention.top_x = 60;

    let ranking = vulnerability_scores(&population, 5, Metric::Cosine)?;
    let target_row = ranking.order[0];
    let target = population.row(target_row).clone();
    println!(
        "target: row {target_row} (V_5 = {:.3}): {}",
        ranking.scores[target_row],
        population.format_row(target_row)
    );

    let shadow = build_worlds(&aux, &target, game.n_shadow, &game, &game.generator, 20)?;
    let test = build_worlds(&test_src, &target, game.n_test, &game, &game.generator, 21)?;

    let aux_stats = NormalizationStats::from_dataset(&aux);
    let attention = run_attention_attack(&target, &shadow, &test, &aux_stats, &game, 22)?;
    println!("target-attention attack AUC = {:.3}", attention.auc);

    let query = run_query_attack(&target, &shadow, &test, &game, 23)?;
    println!("query-based attack AUC     = {:.3}", query.auc);
    Ok(())
}
