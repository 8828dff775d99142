//! Load points from a CSV file (skipping a header and a label column) and
//! cluster them, printing the result as JSON the way the CLI's `run`
//! subcommand does.
//!
//! Run with: `cargo run --release --example csv_clustering`

use std::io::Write as _;

use onebatchpam::{
    load_csv, one_batch_pam, Dissimilarity, EvalCounter, OneBatchConfig, RandomSeed,
};

fn main() {
    // a small labeled dataset: id column, two features
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(file, "id,x,y").unwrap();
    for (id, x, y) in [
        (1, 0.2, 0.1),
        (2, 0.0, -0.3),
        (3, 0.4, 0.2),
        (4, 9.8, 10.1),
        (5, 10.2, 9.9),
        (6, 10.0, 10.4),
        (7, -5.1, 4.9),
        (8, -4.8, 5.2),
        (9, -5.3, 5.0),
    ] {
        writeln!(file, "{id},{x},{y}").unwrap();
    }

    let data = load_csv(file.path(), true, &[0]).expect("well-formed csv");
    println!("loaded {} points of dimension {}", data.n(), data.p());

    let cfg = OneBatchConfig {
        batch_size: Some(data.n()),
        evaluate_exact: true,
        ..OneBatchConfig::new(3, Dissimilarity::L2)
    };
    let result =
        one_batch_pam(&data, &cfg, RandomSeed(0), &mut EvalCounter::new()).expect("run succeeds");
    for &row in &result.medoids {
        println!("medoid row {row}: {:?}", data.row(row));
    }
    println!("{}", serde_json::to_string_pretty(&result).expect("serializable"));
}
