//! Compare the four target-selection methods on the bundled sample data.
//!
//! Distance ranking is the principled selector; random, rare-value, and
//! log-likelihood are the baselines it is evaluated against. The example
//! prints each method's picks and how much the methods agree.
//!
//! Run with: `cargo run --release --example selection_methods`

use std::path::Path;

use synth_audit::attack::SelectionPlan;
use synth_audit::data::{load_dataset, LoadOptions};
use synth_audit::selection::SelectionMethod;

fn main() -> synth_audit::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let dataset = load_dataset(
        &dir.join("sample.csv"),
        &dir.join("sample_schema.json"),
        LoadOptions { has_header: true },
    )?;

    let plan = SelectionPlan {
        r: 10,
        ..Default::default()
    };
    let methods = [
        SelectionMethod::Distance,
        SelectionMethod::Random,
        SelectionMethod::RareValue,
        SelectionMethod::LogLikelihood,
    ];

    let mut picks = Vec::new();
    for (i, method) in methods.iter().enumerate() {
        let result = plan.run_method(&dataset, *method, 40 + i as u64)?;
        println!("{:<15} rows {:?}", method.name(), result.selected);
        picks.push(result.selected);
    }

    println!("\npairwise overlap of the selected sets:");
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            let shared = picks[i].iter().filter(|r| picks[j].contains(r)).count();
            println!(
                "  {:<15} vs {:<15} -> {shared}/10",
                methods[i].name(),
                methods[j].name()
            );
        }
    }

    println!("\nsample of what the distance method picked:");
    for &row in picks[0].iter().take(3) {
        println!("  row {row}: {}", dataset.format_row(row));
    }
    Ok(())
}
