//! Experiment runner: grids over algorithms, k, and seeds, with relative
//! objective/time metrics, Pareto fronts, and machine-readable outputs
//! (a raw-records CSV plus a JSON summary).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::{
    alternate, clara, kmc2_seed, kmeanspp_seed, ls_kmeanspp, random_select, ClaraConfig,
    SeedingConfig,
};
use crate::batch::BatchStrategy;
use crate::data::{generate_blobs, load_csv, DataMatrix, RandomSeed, SyntheticSpec};
use crate::dissimilarity::{Dissimilarity, EvalCounter};
use crate::error::{Error, Result};
use crate::swap::{faster_pam, one_batch_pam, OneBatchConfig, RunResult};

/// Where the experiment's points come from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSource {
    Csv {
        path: PathBuf,
        #[serde(default)]
        has_header: bool,
        #[serde(default)]
        drop_columns: Vec<usize>,
    },
    Synthetic(SyntheticSpec),
}

impl DatasetSource {
    pub fn load(&self) -> Result<DataMatrix> {
        match self {
            DatasetSource::Csv {
                path,
                has_header,
                drop_columns,
            } => load_csv(path, *has_header, drop_columns),
            DatasetSource::Synthetic(spec) => generate_blobs(spec),
        }
    }
}

/// "auto" or an explicit value, for parameters with a built-in heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
enum AutoOr<T> {
    Value(T),
    Keyword(AutoKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
enum AutoKeyword {
    #[serde(rename = "auto")]
    #[serde(alias = "AUTO")]
    Auto,
}

impl<T> AutoOr<T> {
    fn into_option(self) -> Option<T> {
        match self {
            AutoOr::Value(v) => Some(v),
            AutoOr::Keyword(_) => None,
        }
    }
}

fn fmt_auto<T: std::fmt::Display>(value: &Option<T>) -> String {
    match value {
        Some(v) => v.to_string(),
        None => "auto".into(),
    }
}

/// A fully resolved algorithm choice with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    OneBatchPam {
        strategy: BatchStrategy,
        batch_size: Option<usize>,
        max_passes: usize,
        epsilon: f64,
    },
    FasterPam {
        max_passes: usize,
    },
    Random,
    Clara(ClaraConfig),
    Alternate {
        max_iters: usize,
    },
    KMeansPp {
        exponent: Option<f64>,
    },
    Kmc2 {
        exponent: Option<f64>,
        chain_length: usize,
    },
    LsKMeansPp {
        exponent: Option<f64>,
        ls_steps: usize,
    },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::OneBatchPam { .. } => "onebatchpam",
            Algorithm::FasterPam { .. } => "fasterpam",
            Algorithm::Random => "random",
            Algorithm::Clara(_) => "clara",
            Algorithm::Alternate { .. } => "alternate",
            Algorithm::KMeansPp { .. } => "kmeanspp",
            Algorithm::Kmc2 { .. } => "kmc2",
            Algorithm::LsKMeansPp { .. } => "lskmeanspp",
        }
    }

    /// Canonical `key=value;...` rendering of the parameters, stable across
    /// runs so records are diffable.
    pub fn params_string(&self) -> String {
        match self {
            Algorithm::OneBatchPam {
                strategy,
                batch_size,
                max_passes,
                epsilon,
            } => format!(
                "variant={};batch_size={};max_passes={max_passes};epsilon={epsilon}",
                strategy.name(),
                fmt_auto(batch_size),
            ),
            Algorithm::FasterPam { max_passes } => format!("max_passes={max_passes}"),
            Algorithm::Random => String::new(),
            Algorithm::Clara(cfg) => format!(
                "reps={};subsample_size={};max_passes={}",
                cfg.repetitions,
                fmt_auto(&cfg.subsample_size),
                cfg.max_passes
            ),
            Algorithm::Alternate { max_iters } => format!("max_iters={max_iters}"),
            Algorithm::KMeansPp { exponent } => format!("exponent={}", fmt_auto(exponent)),
            Algorithm::Kmc2 {
                exponent,
                chain_length,
            } => format!("exponent={};chain_length={chain_length}", fmt_auto(exponent)),
            Algorithm::LsKMeansPp { exponent, ls_steps } => {
                format!("exponent={};ls_steps={ls_steps}", fmt_auto(exponent))
            }
        }
    }

    /// Runs the algorithm on one grid cell. `evaluate_exact` requests an
    /// exact-objective evaluation for algorithms that do not already compute
    /// one as part of their work.
    pub fn run(
        &self,
        data: &DataMatrix,
        k: usize,
        metric: Dissimilarity,
        seed: RandomSeed,
        evaluate_exact: bool,
        counter: &mut EvalCounter,
    ) -> Result<RunResult> {
        match self {
            Algorithm::OneBatchPam {
                strategy,
                batch_size,
                max_passes,
                epsilon,
            } => {
                let cfg = OneBatchConfig {
                    k,
                    dissimilarity: metric,
                    strategy: *strategy,
                    batch_size: *batch_size,
                    max_passes: *max_passes,
                    epsilon: *epsilon,
                    evaluate_exact,
                };
                one_batch_pam(data, &cfg, seed, counter)
            }
            Algorithm::FasterPam { max_passes } => {
                faster_pam(data, k, metric, *max_passes, seed, counter)
            }
            Algorithm::Random => random_select(data, k, metric, seed, evaluate_exact, counter),
            Algorithm::Clara(cfg) => clara(data, k, metric, cfg, seed, counter),
            Algorithm::Alternate { max_iters } => {
                alternate(data, k, metric, *max_iters, seed, counter)
            }
            Algorithm::KMeansPp { exponent } => {
                let cfg = SeedingConfig {
                    exponent: *exponent,
                    ..SeedingConfig::default()
                };
                kmeanspp_seed(data, k, metric, &cfg, seed, evaluate_exact, counter)
            }
            Algorithm::Kmc2 {
                exponent,
                chain_length,
            } => {
                let cfg = SeedingConfig {
                    exponent: *exponent,
                    chain_length: *chain_length,
                    ..SeedingConfig::default()
                };
                kmc2_seed(data, k, metric, &cfg, seed, evaluate_exact, counter)
            }
            Algorithm::LsKMeansPp { exponent, ls_steps } => {
                let cfg = SeedingConfig {
                    exponent: *exponent,
                    local_search_steps: *ls_steps,
                    ..SeedingConfig::default()
                };
                ls_kmeanspp(data, k, metric, &cfg, seed, evaluate_exact, counter)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OneBatchParams {
    #[serde(default = "default_variant")]
    variant: String,
    #[serde(default = "auto_usize")]
    batch_size: AutoOr<usize>,
    #[serde(default = "default_max_passes")]
    max_passes: usize,
    #[serde(default)]
    epsilon: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FasterPamParams {
    #[serde(default = "default_max_passes")]
    max_passes: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmptyParams {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaraParams {
    #[serde(default = "default_reps")]
    reps: usize,
    #[serde(default = "auto_usize")]
    subsample_size: AutoOr<usize>,
    #[serde(default = "default_max_passes")]
    max_passes: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlternateParams {
    #[serde(default = "default_max_iters")]
    max_iters: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KMeansPpParams {
    #[serde(default = "auto_f64")]
    exponent: AutoOr<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Kmc2Params {
    #[serde(default = "auto_f64")]
    exponent: AutoOr<f64>,
    #[serde(default = "default_chain_length")]
    chain_length: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LsParams {
    #[serde(default = "auto_f64")]
    exponent: AutoOr<f64>,
    #[serde(default = "default_ls_steps")]
    ls_steps: usize,
}

fn default_variant() -> String {
    "unif".into()
}
fn auto_usize() -> AutoOr<usize> {
    AutoOr::Keyword(AutoKeyword::Auto)
}
fn auto_f64() -> AutoOr<f64> {
    AutoOr::Keyword(AutoKeyword::Auto)
}
fn default_max_passes() -> usize {
    10
}
fn default_reps() -> usize {
    5
}
fn default_max_iters() -> usize {
    100
}
fn default_chain_length() -> usize {
    100
}
fn default_ls_steps() -> usize {
    5
}

fn parse_params<T: serde::de::DeserializeOwned>(
    name: &str,
    params: &serde_json::Value,
) -> Result<T> {
    let value = if params.is_null() {
        serde_json::Value::Object(serde_json::Map::new())
    } else {
        params.clone()
    };
    serde_json::from_value(value)
        .map_err(|e| Error::InvalidConfig(format!("bad parameters for {name}: {e}")))
}

/// One entry of the experiment's algorithm list: a name plus a parameter
/// map. Unknown names and unknown parameter keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub name: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl AlgorithmSpec {
    pub fn resolve(&self) -> Result<Algorithm> {
        let name = self.name.to_ascii_lowercase();
        match name.as_str() {
            "onebatchpam" => {
                let p: OneBatchParams = parse_params(&name, &self.params)?;
                Ok(Algorithm::OneBatchPam {
                    strategy: p.variant.parse()?,
                    batch_size: p.batch_size.into_option(),
                    max_passes: p.max_passes,
                    epsilon: p.epsilon,
                })
            }
            "fasterpam" => {
                let p: FasterPamParams = parse_params(&name, &self.params)?;
                Ok(Algorithm::FasterPam {
                    max_passes: p.max_passes,
                })
            }
            "random" => {
                let _: EmptyParams = parse_params(&name, &self.params)?;
                Ok(Algorithm::Random)
            }
            "clara" => {
                let p: ClaraParams = parse_params(&name, &self.params)?;
                Ok(Algorithm::Clara(ClaraConfig {
                    repetitions: p.reps,
                    subsample_size: p.subsample_size.into_option(),
                    max_passes: p.max_passes,
                }))
            }
            "alternate" => {
                let p: AlternateParams = parse_params(&name, &self.params)?;
                Ok(Algorithm::Alternate {
                    max_iters: p.max_iters,
                })
            }
            "kmeanspp" => {
                let p: KMeansPpParams = parse_params(&name, &self.params)?;
                Ok(Algorithm::KMeansPp {
                    exponent: p.exponent.into_option(),
                })
            }
            "kmc2" => {
                let p: Kmc2Params = parse_params(&name, &self.params)?;
                Ok(Algorithm::Kmc2 {
                    exponent: p.exponent.into_option(),
                    chain_length: p.chain_length,
                })
            }
            "lskmeanspp" => {
                let p: LsParams = parse_params(&name, &self.params)?;
                Ok(Algorithm::LsKMeansPp {
                    exponent: p.exponent.into_option(),
                    ls_steps: p.ls_steps,
                })
            }
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm {other:?} (expected onebatchpam, fasterpam, random, clara, \
                 alternate, kmeanspp, kmc2, or lskmeanspp)"
            ))),
        }
    }
}

/// The full experiment grid. `output_path` receives the raw-records CSV;
/// the JSON summary lands next to it with a `.summary.json` extension.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub metric: Dissimilarity,
    pub algorithms: Vec<AlgorithmSpec>,
    pub k_values: Vec<usize>,
    pub seeds: Vec<u64>,
    pub output_path: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn summary_path(&self) -> PathBuf {
        self.output_path.with_extension("summary.json")
    }
}

/// One grid cell's measured outcome.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchRecord {
    pub algorithm: String,
    pub params: String,
    pub k: usize,
    pub seed: u64,
    pub objective: f64,
    pub wall_millis: f64,
    pub dissim_evals: u64,
    pub swaps: u64,
}

/// A labeled (mean time, mean objective) point; both axes are minimized.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ParetoPoint {
    pub label: String,
    pub mean_time: f64,
    pub mean_objective: f64,
}

/// The relative-objective excess over the cell's best algorithm:
/// `objective / best_objective - 1`.
pub fn delta_relative_objective(objective: f64, best_objective: f64) -> Result<f64> {
    if !(best_objective > 0.0 && best_objective.is_finite()) {
        return Err(Error::ZeroBestObjective);
    }
    Ok(objective / best_objective - 1.0)
}

/// Wall time relative to the reference (best-objective) algorithm's time.
pub fn relative_time(time: f64, reference_time: f64) -> Result<f64> {
    if !(reference_time > 0.0 && reference_time.is_finite()) {
        return Err(Error::ZeroReferenceTime);
    }
    Ok(time / reference_time)
}

/// All points not dominated on (time, objective), sorted by time ascending.
/// `q` dominates `p` when `q` is no worse on both axes and strictly better
/// on at least one; exact duplicates therefore survive together.
pub fn pareto_front(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    let dominated = |p: &ParetoPoint| {
        points.iter().any(|q| {
            q.mean_time <= p.mean_time
                && q.mean_objective <= p.mean_objective
                && (q.mean_time < p.mean_time || q.mean_objective < p.mean_objective)
        })
    };
    let mut front: Vec<ParetoPoint> = points.iter().filter(|p| !dominated(p)).cloned().collect();
    front.sort_by(|a, b| {
        a.mean_time
            .partial_cmp(&b.mean_time)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                a.mean_objective
                    .partial_cmp(&b.mean_objective)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    front
}

/// Per-(algorithm, k) aggregate over seeds.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CellSummary {
    pub algorithm: String,
    pub params: String,
    pub k: usize,
    pub runs: usize,
    pub mean_objective: f64,
    pub std_objective: f64,
    pub mean_wall_millis: f64,
    pub std_wall_millis: f64,
    pub mean_dissim_evals: f64,
    /// Excess over the best mean objective within this k group; `None` when
    /// the best mean objective is zero.
    pub delta_relative_objective: Option<f64>,
    /// Time relative to the reference algorithm; `None` when no algorithm
    /// in the group has a positive mean time.
    pub relative_time: Option<f64>,
}

/// Aggregates for one value of k: per-algorithm summaries plus the Pareto
/// front over (mean time, mean objective).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KGroupSummary {
    pub k: usize,
    /// Set when the best-objective algorithm had zero mean time and the
    /// relative-time reference fell back to the fastest positive time.
    pub rt_reference_degenerate: bool,
    pub algorithms: Vec<CellSummary>,
    pub pareto_front: Vec<ParetoPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub groups: Vec<KGroupSummary>,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_std(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (values.len() - 1) as f64;
    var.sqrt()
}

/// Recomputes the summary from raw records: per-(algorithm, k) means and
/// sample standard deviations, relative metrics against the group's
/// best-mean-objective algorithm, and the Pareto front per k.
pub fn summarize(records: &[BenchRecord]) -> Result<Summary> {
    let mut k_order: Vec<usize> = Vec::new();
    for r in records {
        if !k_order.contains(&r.k) {
            k_order.push(r.k);
        }
    }
    let mut groups = Vec::new();
    for &k in &k_order {
        let mut algo_order: Vec<(String, String)> = Vec::new();
        for r in records.iter().filter(|r| r.k == k) {
            let key = (r.algorithm.clone(), r.params.clone());
            if !algo_order.contains(&key) {
                algo_order.push(key);
            }
        }
        let mut cells = Vec::new();
        for (algorithm, params) in &algo_order {
            let runs: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.k == k && &r.algorithm == algorithm && &r.params == params)
                .collect();
            let objectives: Vec<f64> = runs.iter().map(|r| r.objective).collect();
            let times: Vec<f64> = runs.iter().map(|r| r.wall_millis).collect();
            let evals: Vec<f64> = runs.iter().map(|r| r.dissim_evals as f64).collect();
            let mean_objective = mean(&objectives);
            let mean_wall_millis = mean(&times);
            cells.push(CellSummary {
                algorithm: algorithm.clone(),
                params: params.clone(),
                k,
                runs: runs.len(),
                mean_objective,
                std_objective: sample_std(&objectives, mean_objective),
                mean_wall_millis,
                std_wall_millis: sample_std(&times, mean_wall_millis),
                mean_dissim_evals: mean(&evals),
                delta_relative_objective: None,
                relative_time: None,
            });
        }
        // the reference algorithm is the best mean objective in the group
        let best_idx = cells
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.mean_objective
                    .partial_cmp(&b.mean_objective)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .expect("non-empty group");
        let best_objective = cells[best_idx].mean_objective;
        let mut reference_time = cells[best_idx].mean_wall_millis;
        let mut degenerate = false;
        if reference_time <= 0.0 {
            degenerate = true;
            reference_time = cells
                .iter()
                .map(|c| c.mean_wall_millis)
                .filter(|&t| t > 0.0)
                .fold(f64::INFINITY, f64::min);
        }
        for cell in &mut cells {
            cell.delta_relative_objective =
                delta_relative_objective(cell.mean_objective, best_objective).ok();
            cell.relative_time = relative_time(cell.mean_wall_millis, reference_time).ok();
        }
        let points: Vec<ParetoPoint> = cells
            .iter()
            .map(|c| ParetoPoint {
                label: if c.params.is_empty() {
                    c.algorithm.clone()
                } else {
                    format!("{} ({})", c.algorithm, c.params)
                },
                mean_time: c.mean_wall_millis,
                mean_objective: c.mean_objective,
            })
            .collect();
        groups.push(KGroupSummary {
            k,
            rt_reference_degenerate: degenerate,
            algorithms: cells,
            pareto_front: pareto_front(&points),
        });
    }
    Ok(Summary { groups })
}

/// Runs the full grid. Every `(algorithm, k, seed)` cell gets a fresh
/// counter and is timed by the algorithm itself (dataset loading is not
/// timed). Records are flushed to the CSV as they are produced, so a
/// failing cell leaves the completed prefix on disk; the failure aborts the
/// run, tagged with the cell's identity.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Vec<BenchRecord>, Summary)> {
    if cfg.algorithms.is_empty() || cfg.k_values.is_empty() || cfg.seeds.is_empty() {
        return Err(Error::InvalidConfig(
            "algorithms, k_values, and seeds must all be non-empty".into(),
        ));
    }
    let resolved: Vec<Algorithm> = cfg
        .algorithms
        .iter()
        .map(|spec| spec.resolve())
        .collect::<Result<_>>()?;
    let data = cfg.dataset.load()?;
    for &k in &cfg.k_values {
        if k == 0 || k > data.n() {
            return Err(Error::InvalidConfig(format!(
                "k = {k} is out of range for n = {}",
                data.n()
            )));
        }
    }
    if let Some(parent) = cfg.output_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    let io_err = |source| Error::Io {
        path: cfg.output_path.clone(),
        source,
    };
    let file = std::fs::File::create(&cfg.output_path).map_err(io_err)?;
    let mut writer = csv::Writer::from_writer(file);

    let mut records = Vec::new();
    for algorithm in &resolved {
        for &k in &cfg.k_values {
            for &seed in &cfg.seeds {
                let mut counter = EvalCounter::new();
                let result = algorithm
                    .run(&data, k, cfg.metric, RandomSeed(seed), true, &mut counter)
                    .map_err(|e| Error::Cell {
                        algorithm: algorithm.name().into(),
                        k,
                        seed,
                        source: Box::new(e),
                    })?;
                let record = BenchRecord {
                    algorithm: algorithm.name().into(),
                    params: algorithm.params_string(),
                    k,
                    seed,
                    objective: result
                        .exact_objective
                        .unwrap_or(result.est_objective),
                    wall_millis: result.wall_millis,
                    dissim_evals: result.dissim_evals,
                    swaps: result.swaps,
                };
                writer
                    .serialize(&record)
                    .and_then(|()| writer.flush().map_err(csv::Error::from))
                    .map_err(|e| Error::InvalidConfig(format!("cannot write records: {e}")))?;
                records.push(record);
            }
        }
    }
    let summary = summarize(&records)?;
    let summary_json = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::InvalidConfig(format!("cannot serialize summary: {e}")))?;
    std::fs::write(cfg.summary_path(), summary_json).map_err(|source| Error::Io {
        path: cfg.summary_path(),
        source,
    })?;
    Ok((records, summary))
}
