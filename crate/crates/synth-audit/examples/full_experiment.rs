//! The complete experiment pipeline in one call: partition a population,
//! select target records with all four methods, play the privacy game per
//! record, and print per-method AUC summaries — the library-level equivalent
//! of `synth-audit attack`.
//!
//! Run with: `cargo run --release --example full_experiment`

use synth_audit::attack::{run_record_experiment, AttackKind, GameConfig, SelectionPlan};
use synth_audit::demo;
use synth_audit::generators::GeneratorSpec;

fn main() -> synth_audit::Result<()> {
    let population = demo::sample_population(4_000, 17);

    let plan = SelectionPlan {
        r: 3,
        ..Default::default()
    };
    let mut game = GameConfig::desk(GeneratorSpec::baynet(2), 18);
    game.dataset_size = 80;
    game.n_shadow = 120;
    game.n_test = 60;
    game.n_queries = 1_000;

    let started = std::time::Instant::now();
    let outcome = run_record_experiment(
        &population,
        (2_400, 1_200),
        &plan,
        &[AttackKind::QueryBased],
        &game,
    )?;

    println!("selected targets per method:");
    for (method, rows) in &outcome.selections {
        println!("  {:<15} {rows:?}", method.name());
    }

    println!("\nper-record results:");
    for result in &outcome.results {
        println!(
            "  {:<15} row {:<6} AUC {:.3}",
            result.method.name(),
            result.target_row,
            result.outcome.auc
        );
    }

    println!("\nsummary (mean +/- std over records):");
    for s in &outcome.summaries {
        println!(
            "  {:<15} {:.3} +/- {:.3}  (n = {})",
            s.method.name(),
            s.mean_auc,
            s.std_auc,
            s.n_records
        );
    }
    println!("\nelapsed: {:.1}s", started.elapsed().as_secs_f64());
    Ok(())
}
