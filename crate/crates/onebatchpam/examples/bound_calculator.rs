//! The minimum-batch-size bound and the default batch-size heuristic.
//!
//! The bound answers: how large must the batch be so that, with probability
//! at least 1 - delta, the single-batch search performs exactly the same
//! swaps as the full-matrix search? Its inputs (data diameter D, smallest
//! objective gap, swap steps) are supplied by the caller; the library never
//! estimates them. The heuristic `min(n, ceil(100 ln(kn)))` is what the run
//! driver applies when no batch size is given.
//!
//! Run with: `cargo run --release --example bound_calculator`

use onebatchpam::{default_batch_size, guaranteed_min_batch_size, BoundInputs};

fn main() {
    println!("guaranteed minimum batch sizes:");
    for (max_dissim, min_gap, failure_prob, swap_steps, n) in [
        (1.0, 0.1, 0.05, 10, 1_000),
        (1.0, 0.1, 0.05, 10, 1_000_000),
        (1.0, 0.05, 0.05, 50, 1_000_000),
        (10.0, 1.0, 0.01, 100, 60_000),
    ] {
        let m = guaranteed_min_batch_size(&BoundInputs {
            max_dissim,
            min_gap,
            failure_prob,
            swap_steps,
            n,
        })
        .expect("valid inputs");
        println!(
            "  D = {max_dissim:>4}, gap = {min_gap:>4}, delta = {failure_prob}, \
             T = {swap_steps:>3}, n = {n:>9}  ->  m >= {m}"
        );
    }

    println!();
    println!("default heuristic m = min(n, ceil(100 ln(kn))):");
    for (n, k) in [(1_000, 10), (60_000, 10), (60_000, 100), (1_000_000, 50)] {
        println!("  n = {n:>9}, k = {k:>3}  ->  m = {}", default_batch_size(n, k));
    }
}
