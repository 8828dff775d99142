//! Run the competitor algorithms on one dataset and print objective, wall
//! time, and the exact evaluation count for each.
//!
//! Run with: `cargo run --release --example baselines`

use onebatchpam::{
    alternate, clara, generate_blobs, kmc2_seed, kmeanspp_seed, ls_kmeanspp, random_select,
    ClaraConfig, Dissimilarity, EvalCounter, RandomSeed, RunResult, SeedingConfig, SyntheticSpec,
};

fn main() {
    let data = generate_blobs(&SyntheticSpec {
        n_points: 2500,
        dimension: 6,
        n_blobs: 6,
        blob_spread: 0.7,
        seed: 3,
    })
    .expect("valid spec");
    let k = 6;
    let metric = Dissimilarity::L1;
    let seed = RandomSeed(1);
    let seeding = SeedingConfig::default();

    let report = |name: &str, result: RunResult| {
        println!(
            "{:<12} objective {:>10.6}  wall {:>8.2} ms  evals {:>9}",
            name,
            result.exact_objective.unwrap_or(result.est_objective),
            result.wall_millis,
            result.dissim_evals
        );
    };

    let mut c = EvalCounter::new();
    report("random", random_select(&data, k, metric, seed, true, &mut c).unwrap());
    report(
        "clara-5",
        clara(&data, k, metric, &ClaraConfig::default(), seed, &mut c).unwrap(),
    );
    report("alternate", alternate(&data, k, metric, 100, seed, &mut c).unwrap());
    report(
        "kmeans++",
        kmeanspp_seed(&data, k, metric, &seeding, seed, true, &mut c).unwrap(),
    );
    report(
        "kmc2",
        kmc2_seed(&data, k, metric, &seeding, seed, true, &mut c).unwrap(),
    );
    report(
        "ls-kmeans++",
        ls_kmeanspp(&data, k, metric, &seeding, seed, true, &mut c).unwrap(),
    );
    println!("total evaluations across all runs: {}", c.count());
}
