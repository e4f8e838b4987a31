//! How records are encoded and compared: one-hot plus min-max blocks, the
//! generalized cosine distance, and the weighted Minkowski family.
//!
//! Run with: `cargo run --release --example distance_metrics`

use std::path::Path;

use synth_audit::data::{load_dataset, LoadOptions};
use synth_audit::encoding::{
    encode, minkowski_mixed_distance, mixed_cosine_distance, NormalizationStats,
};

fn main() -> synth_audit::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let dataset = load_dataset(
        &dir.join("sample.csv"),
        &dir.join("sample_schema.json"),
        LoadOptions { has_header: true },
    )?;
    let schema = dataset.schema();
    let stats = NormalizationStats::from_dataset(&dataset);

    let a = dataset.row(0);
    let enc_a = encode(a, schema, &stats)?;
    println!("record 0: {}", dataset.format_row(0));
    println!(
        "encoded: {} one-hot bits, {} normalized continuous values",
        enc_a.cat_block.len(),
        enc_a.cont_block.len()
    );

    println!(
        "\n{:<42} {:>8} {:>8} {:>8}",
        "pair", "cosine", "L1", "L2"
    );
    for row in [1, 2, 3, 50, 100] {
        let b = dataset.row(row);
        let enc_b = encode(b, schema, &stats)?;
        println!(
            "{:<42} {:>8.3} {:>8.3} {:>8.3}",
            format!("row 0 vs row {row}"),
            mixed_cosine_distance(&enc_a, &enc_b, schema)?,
            minkowski_mixed_distance(&enc_a, &enc_b, schema, 1)?,
            minkowski_mixed_distance(&enc_a, &enc_b, schema, 2)?,
        );
    }

    let self_distance = mixed_cosine_distance(&enc_a, &enc_a, schema)?;
    println!("\nrow 0 vs itself: {self_distance:.1e} (identical records sit at distance 0)");
    Ok(())
}
