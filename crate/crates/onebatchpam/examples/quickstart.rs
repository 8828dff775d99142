//! Cluster synthetic blob data with the single-batch local search and
//! compare its batch estimate against the exact objective.
//!
//! Run with: `cargo run --release --example quickstart`

use onebatchpam::{
    generate_blobs, one_batch_pam, BatchStrategy, Dissimilarity, EvalCounter, OneBatchConfig,
    RandomSeed, SyntheticSpec,
};

fn main() {
    let spec = SyntheticSpec {
        n_points: 2000,
        dimension: 8,
        n_blobs: 5,
        blob_spread: 0.8,
        seed: 42,
    };
    let data = generate_blobs(&spec).expect("valid spec");

    let cfg = OneBatchConfig {
        strategy: BatchStrategy::Nniw,
        evaluate_exact: true,
        ..OneBatchConfig::new(5, Dissimilarity::L1)
    };
    let mut counter = EvalCounter::new();
    let result = one_batch_pam(&data, &cfg, RandomSeed(7), &mut counter).expect("run succeeds");

    println!("medoid rows:        {:?}", result.medoids);
    println!("batch estimate:     {:.6}", result.est_objective);
    println!(
        "exact objective:    {:.6}",
        result.exact_objective.expect("requested")
    );
    println!(
        "swaps / passes:     {} / {}",
        result.swaps, result.passes
    );
    println!(
        "dissimilarity evaluations: {} (vs {} for a full matrix)",
        result.dissim_evals,
        spec.n_points * spec.n_points
    );
}
