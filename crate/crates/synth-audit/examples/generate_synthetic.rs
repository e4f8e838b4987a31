//! Fit each built-in generator on the bundled sample data and check how well
//! the synthetic output preserves simple marginals.
//!
//! Run with: `cargo run --release --example generate_synthetic`

use std::path::Path;

use synth_audit::data::{load_dataset, Cell, Dataset, LoadOptions};
use synth_audit::generators::{fit, GeneratorSpec};

fn marginal(dataset: &Dataset, attribute: usize, value: u32) -> f64 {
    dataset
        .rows()
        .iter()
        .filter(|r| r.cells[attribute] == Cell::Cat(value))
        .count() as f64
        / dataset.len() as f64
}

fn continuous_mean(dataset: &Dataset, attribute: usize) -> f64 {
    dataset
        .rows()
        .iter()
        .map(|r| r.cells[attribute].as_cont())
        .sum::<f64>()
        / dataset.len() as f64
}

fn main() -> synth_audit::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let training = load_dataset(
        &dir.join("sample.csv"),
        &dir.join("sample_schema.json"),
        LoadOptions { has_header: true },
    )?;
    println!("training data: {training}");

    let specs = [
        GeneratorSpec::synthpop(),
        GeneratorSpec::baynet(2),
        GeneratorSpec::privbayes(2, 10.0),
    ];

    println!(
        "\n{:<22} {:>12} {:>12} {:>12}",
        "generator", "P(region=isles)", "P(plan=free)", "mean(spend)"
    );
    println!(
        "{:<22} {:>12.3} {:>12.3} {:>12.1}",
        "training",
        marginal(&training, 0, 4),
        marginal(&training, 3, 0),
        continuous_mean(&training, 6)
    );
    for spec in specs {
        let model = fit(&spec, &training, 7)?;
        let synthetic = model.generate(training.len(), 8);
        println!(
            "{:<22} {:>12.3} {:>12.3} {:>12.1}",
            spec.name(),
            marginal(&synthetic, 0, 4),
            marginal(&synthetic, 3, 0),
            continuous_mean(&synthetic, 6)
        );
    }

    // Write one synthetic release next to the binary for inspection.
    let model = fit(&GeneratorSpec::baynet(2), &training, 7)?;
    let synthetic = model.generate(training.len(), 9);
    let out = std::env::temp_dir().join("synth_audit_synthetic.csv");
    synth_audit::data::write_dataset(&synthetic, &out, true)?;
    println!("\nwrote a synthetic release to {}", out.display());
    Ok(())
}
