//! Throughput comparison of the bitset query engine against the naive scan.
//!
//! Informational only; correctness is gated by the differential tests.
//! Run with: `cargo bench --bench query_throughput`

use std::time::Instant;

use synth_audit::demo;
use synth_audit::query::{answer_queries, answer_queries_naive, sample_queries, MaskIndex};

fn main() {
    let dataset = demo::sample_population(1_000, 1);
    let target = dataset.row(0).clone();
    let n_queries = 100_000;
    let queries = sample_queries(dataset.schema(), &target, n_queries, 2).unwrap();

    // Mask build cost, amortized across the query list per synthetic dataset.
    let started = Instant::now();
    let mut builds = 0u32;
    while started.elapsed().as_secs_f64() < 0.5 {
        let index = MaskIndex::build(&dataset, &target).unwrap();
        std::hint::black_box(&index);
        builds += 1;
    }
    let build_ms = started.elapsed().as_secs_f64() * 1e3 / builds as f64;

    let started = Instant::now();
    let fast = answer_queries(&dataset, &queries).unwrap();
    let fast_secs = started.elapsed().as_secs_f64();

    let started = Instant::now();
    let naive = answer_queries_naive(&dataset, &queries).unwrap();
    let naive_secs = started.elapsed().as_secs_f64();

    assert_eq!(fast, naive);
    println!("dataset: {} rows, {} attributes", dataset.len(), dataset.schema().len());
    println!("mask build: {build_ms:.3} ms per dataset");
    println!(
        "bitset engine: {:>12.0} queries/s ({fast_secs:.3}s for {n_queries})",
        n_queries as f64 / fast_secs
    );
    println!(
        "naive scan:    {:>12.0} queries/s ({naive_secs:.3}s for {n_queries})",
        n_queries as f64 / naive_secs
    );
    println!("speedup: {:.1}x", naive_secs / fast_secs);
}
