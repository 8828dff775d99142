//! k-medoids clustering around a single-batch local search.
//!
//! The core algorithm estimates the k-medoids objective on one fixed batch
//! of m columns, computing the n-by-m dissimilarities once and reusing them
//! for every swap step. Candidates still come from the full dataset, which
//! separates the approach from subsampling methods such as CLARA. Setting
//! `m = n` recovers the classic full-matrix eager local search.
//!
//! The crate also ships the usual competitors (random selection, CLARA,
//! alternating optimization, distance-power seeding with and without local
//! search, Markov-chain seeding) on a shared dissimilarity-evaluation
//! counter, plus a benchmark harness that runs (algorithm, k, seed) grids
//! and reports relative objectives, relative times, and Pareto fronts.
//!
//! ```
//! use onebatchpam::{
//!     generate_blobs, one_batch_pam, BatchStrategy, Dissimilarity, EvalCounter, OneBatchConfig,
//!     RandomSeed, SyntheticSpec,
//! };
//!
//! let data = generate_blobs(&SyntheticSpec {
//!     n_points: 500,
//!     dimension: 4,
//!     n_blobs: 5,
//!     blob_spread: 0.6,
//!     seed: 1,
//! })
//! .unwrap();
//! let cfg = OneBatchConfig {
//!     strategy: BatchStrategy::Nniw,
//!     evaluate_exact: true,
//!     ..OneBatchConfig::new(5, Dissimilarity::L1)
//! };
//! let mut counter = EvalCounter::new();
//! let result = one_batch_pam(&data, &cfg, RandomSeed(7), &mut counter).unwrap();
//! assert_eq!(result.medoids.len(), 5);
//! assert_eq!(result.dissim_evals, counter.count());
//! ```

pub mod baselines;
pub mod batch;
pub mod bench;
pub mod data;
pub mod dissimilarity;
pub mod error;
pub mod swap;

pub use baselines::{
    alternate, clara, kmc2_seed, kmeanspp_seed, ls_kmeanspp, random_select, ClaraConfig,
    SeedingConfig,
};
pub use batch::{
    default_batch_size, guaranteed_min_batch_size, lwcs_sampling_distribution, sample_batch,
    BatchStrategy, BatchView, BoundInputs,
};
pub use bench::{
    delta_relative_objective, pareto_front, relative_time, run_experiment, summarize, Algorithm,
    AlgorithmSpec, BenchRecord, DatasetSource, ExperimentConfig, ParetoPoint, Summary,
};
pub use data::{
    blob_centers, generate_blobs, load_csv, write_csv, DataMatrix, RandomSeed, SyntheticSpec,
};
pub use dissimilarity::{cross_dissim_matrix, dissim, CrossMatrix, Dissimilarity, EvalCounter};
pub use error::{Error, Result};
pub use swap::{
    apply_swap, estimated_objective, exact_objective, faster_pam, one_batch_pam, one_medoid,
    run_swap_pass, swap_gain_scan, swap_slot_gains, MedoidSet, NeighborCache, OneBatchConfig,
    RunResult, MIN_RELATIVE_GAIN,
};
