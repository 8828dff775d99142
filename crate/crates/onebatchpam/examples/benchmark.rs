//! Run a small experiment grid in code: several algorithms, two values of
//! k, five seeds each, with relative-objective/relative-time metrics and
//! the Pareto front. Writes the raw records CSV and the JSON summary to a
//! temporary directory, as the CLI's `bench` subcommand would.
//!
//! Run with: `cargo run --release --example benchmark`

use onebatchpam::{
    run_experiment, AlgorithmSpec, DatasetSource, Dissimilarity, ExperimentConfig, SyntheticSpec,
};

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let algorithm = |name: &str, params: serde_json::Value| AlgorithmSpec {
        name: name.into(),
        params,
    };
    let cfg = ExperimentConfig {
        dataset: DatasetSource::Synthetic(SyntheticSpec {
            n_points: 2000,
            dimension: 10,
            n_blobs: 4,
            blob_spread: 1.0,
            seed: 99,
        }),
        metric: Dissimilarity::L1,
        algorithms: vec![
            algorithm("fasterpam", serde_json::Value::Null),
            algorithm("onebatchpam", serde_json::json!({"variant": "nniw"})),
            algorithm("clara", serde_json::json!({"reps": 5})),
            algorithm("kmeanspp", serde_json::Value::Null),
            algorithm("random", serde_json::Value::Null),
        ],
        k_values: vec![5, 10],
        seeds: vec![0, 1, 2, 3, 4],
        output_path: dir.path().join("records.csv"),
    };

    let (records, summary) = run_experiment(&cfg).expect("experiment runs");
    println!(
        "{} records -> {} and {}",
        records.len(),
        cfg.output_path.display(),
        cfg.summary_path().display()
    );
    for group in &summary.groups {
        println!();
        println!(
            "k = {:<3} {:<42} {:>10} {:>9} {:>9}",
            group.k, "algorithm", "objective", "dRO", "RT"
        );
        for cell in &group.algorithms {
            println!(
                "      {:<42} {:>10.5} {:>8.2}% {:>8.2}%",
                format!("{} {}", cell.algorithm, cell.params),
                cell.mean_objective,
                100.0 * cell.delta_relative_objective.unwrap_or(f64::NAN),
                100.0 * cell.relative_time.unwrap_or(f64::NAN),
            );
        }
        let labels: Vec<&str> = group.pareto_front.iter().map(|p| p.label.as_str()).collect();
        println!("      pareto front: {}", labels.join(" | "));
    }
}
