//! One full privacy game at a small scale: pick the most vulnerable record
//! and a random record, attack both with the query-based method, and compare
//! their measured risk.
//!
//! Run with: `cargo run --release --example query_attack`

use synth_audit::attack::{build_worlds, run_query_attack, GameConfig};
use synth_audit::demo;
use synth_audit::encoding::Metric;
use synth_audit::generators::GeneratorSpec;
use synth_audit::selection::{select_random, vulnerability_scores};

fn main() -> synth_audit::Result<()> {
    let population = demo::sample_population(3_000, 1);
    let (aux, test_src) = population.partition(1_800, 1_000, 2)?;

    // Small game so the example finishes in seconds.
    let mut game = GameConfig::desk(GeneratorSpec::baynet(2), 3);
    game.dataset_size = 80;
    game.n_shadow = 100;
    game.n_test = 60;
    game.n_queries = 1_000;

    let ranking = vulnerability_scores(&population, 5, Metric::Cosine)?;
    let vulnerable_row = ranking.order[0];
    let random_row = select_random(&population, 1, 4)?.selected[0];

    for (label, row) in [("most vulnerable", vulnerable_row), ("random", random_row)] {
        let target = population.row(row).clone();
        let shadow = build_worlds(&aux, &target, game.n_shadow, &game, &game.generator, 10)?;
        let test = build_worlds(&test_src, &target, game.n_test, &game, &game.generator, 11)?;
        let outcome = run_query_attack(&target, &shadow, &test, &game, 12)?;
        println!(
            "{label:<16} row {row:<5} V_5 = {:.3}  attack AUC = {:.3}",
            ranking.scores[row], outcome.auc
        );
    }
    println!("\nAUC 0.5 means the attacker learns nothing; 1.0 means certain membership.");
    Ok(())
}
