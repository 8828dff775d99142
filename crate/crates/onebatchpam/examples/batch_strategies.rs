//! Compare the four batch strategies (uniform, debiased, nearest-neighbor
//! importance weighting, lightweight coreset) against the full-matrix
//! search on the same dataset.
//!
//! Run with: `cargo run --release --example batch_strategies`

use onebatchpam::{
    faster_pam, generate_blobs, one_batch_pam, BatchStrategy, Dissimilarity, EvalCounter,
    OneBatchConfig, RandomSeed, SyntheticSpec,
};

fn main() {
    let data = generate_blobs(&SyntheticSpec {
        n_points: 3000,
        dimension: 10,
        n_blobs: 4,
        blob_spread: 1.0,
        seed: 11,
    })
    .expect("valid spec");
    let k = 8;
    let seeds: Vec<u64> = (0..5).collect();

    let mut counter = EvalCounter::new();
    let full: f64 = seeds
        .iter()
        .map(|&s| {
            faster_pam(&data, k, Dissimilarity::L1, 10, RandomSeed(s), &mut counter)
                .expect("run succeeds")
                .exact_objective
                .expect("full search knows its objective")
        })
        .sum::<f64>()
        / seeds.len() as f64;
    println!("full-matrix search mean objective: {full:.6}");
    println!();
    println!("{:<8} {:>12} {:>14} {:>12}", "variant", "objective", "vs full", "evals");

    for strategy in [
        BatchStrategy::Unif,
        BatchStrategy::Debias,
        BatchStrategy::Nniw,
        BatchStrategy::Lwcs,
    ] {
        let cfg = OneBatchConfig {
            strategy,
            evaluate_exact: true,
            ..OneBatchConfig::new(k, Dissimilarity::L1)
        };
        let mut evals = 0;
        let mean: f64 = seeds
            .iter()
            .map(|&s| {
                let r = one_batch_pam(&data, &cfg, RandomSeed(s), &mut EvalCounter::new())
                    .expect("run succeeds");
                evals = r.dissim_evals;
                r.exact_objective.expect("requested")
            })
            .sum::<f64>()
            / seeds.len() as f64;
        println!(
            "{:<8} {:>12.6} {:>+13.2}% {:>12}",
            strategy.name(),
            mean,
            100.0 * (mean / full - 1.0),
            evals
        );
    }
}
