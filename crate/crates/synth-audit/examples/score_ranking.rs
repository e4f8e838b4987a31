//! Rank the bundled sample dataset by vulnerability score.
//!
//! Every record is scored by its mean distance to its 5 closest neighbors;
//! records far from everyone else top the ranking and are the natural targets
//! for a membership-inference audit.
//!
//! Run with: `cargo run --release --example score_ranking`

use std::path::Path;

use synth_audit::data::{load_dataset, LoadOptions};
use synth_audit::encoding::Metric;
use synth_audit::selection::vulnerability_scores;

fn main() -> synth_audit::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let dataset = load_dataset(
        &dir.join("sample.csv"),
        &dir.join("sample_schema.json"),
        LoadOptions { has_header: true },
    )?;
    println!("loaded {dataset}");

    let ranking = vulnerability_scores(&dataset, 5, Metric::Cosine)?;

    println!("\nmost vulnerable records (k = {}, metric = {}):", ranking.k, ranking.metric_id);
    println!("{:<6} {:<10} record", "rank", "score");
    for (rank, &row) in ranking.order.iter().take(10).enumerate() {
        println!(
            "{:<6} {:<10.4} {}",
            rank + 1,
            ranking.scores[row],
            dataset.format_row(row)
        );
    }

    println!("\nleast vulnerable records:");
    for &row in ranking.order.iter().rev().take(3) {
        println!("{:<17.4} {}", ranking.scores[row], dataset.format_row(row));
    }
    Ok(())
}
