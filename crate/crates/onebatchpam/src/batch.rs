//! Batch construction: the subsample, its per-column weights, and the
//! weighted (optionally debiased) n-by-m dissimilarity matrix that the swap
//! engine runs on. Also hosts the minimum-batch-size bound calculator and
//! the default batch-size heuristic.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, RandomSeed};
use crate::dissimilarity::{cross_dissim_matrix, CrossMatrix, Dissimilarity, EvalCounter};
use crate::error::{Error, Result};

/// How the batch is drawn and weighted.
///
/// - `Unif`: uniform without replacement, unit weights.
/// - `Debias`: uniform without replacement; each batch point's own column
///   entry is set to infinity so batch members gain no artificial advantage
///   as medoid candidates.
/// - `Nniw`: uniform without replacement; column j is weighted by the number
///   of dataset points whose nearest batch representative is column j.
/// - `Lwcs`: lightweight-coreset sampling, with replacement, with
///   inverse-probability weights.
///
/// The four strategies are mutually exclusive presets; they do not compose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchStrategy {
    Unif,
    Debias,
    Nniw,
    Lwcs,
}

impl BatchStrategy {
    pub fn name(self) -> &'static str {
        match self {
            BatchStrategy::Unif => "unif",
            BatchStrategy::Debias => "debias",
            BatchStrategy::Nniw => "nniw",
            BatchStrategy::Lwcs => "lwcs",
        }
    }
}

impl std::str::FromStr for BatchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unif" => Ok(BatchStrategy::Unif),
            "debias" => Ok(BatchStrategy::Debias),
            "nniw" => Ok(BatchStrategy::Nniw),
            "lwcs" => Ok(BatchStrategy::Lwcs),
            other => Err(Error::InvalidConfig(format!(
                "unknown batch strategy {other:?} (expected unif, debias, nniw, or lwcs)"
            ))),
        }
    }
}

/// A sampled batch: column rows, per-column weights, and the weighted
/// n-by-m matrix the swap engine scans.
///
/// Invariants: weights are positive; `matrix(i, j) = w_j * d(x_i, x_col(j))`
/// wherever finite; when debiased, the entries `(col(j), j)` are the only
/// infinite ones.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchView {
    indices: Vec<usize>,
    weights: Vec<f64>,
    matrix: CrossMatrix,
    debiased: bool,
}

impl BatchView {
    /// Batch size m.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Number of dataset rows (candidate rows) covered by the matrix.
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Dataset row backing column j.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn matrix(&self) -> &CrossMatrix {
        &self.matrix
    }

    pub fn debiased(&self) -> bool {
        self.debiased
    }

    /// Multiplies every weight (and thus every matrix entry) by `c > 0`.
    /// Scaling leaves the swap engine's decisions unchanged; only the size
    /// of the estimate changes.
    pub fn scale_weights(&mut self, c: f64) -> Result<()> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "weight scale must be a positive finite number, got {c}"
            )));
        }
        for w in &mut self.weights {
            *w *= c;
        }
        for j in 0..self.matrix.cols() {
            self.matrix.scale_column(j, c);
        }
        Ok(())
    }

    /// Builds a batch from caller-chosen rows for the without-replacement
    /// strategies. Lightweight-coreset weights depend on the sampling
    /// distribution, so `Lwcs` is rejected here.
    pub fn from_rows(
        data: &DataMatrix,
        rows: Vec<usize>,
        strategy: BatchStrategy,
        kind: Dissimilarity,
        counter: &mut EvalCounter,
    ) -> Result<Self> {
        let n = data.n();
        let m = rows.len();
        if strategy == BatchStrategy::Lwcs {
            return Err(Error::InvalidConfig(
                "lwcs batches must be drawn by sample_batch".into(),
            ));
        }
        if m == 0 || m > n {
            return Err(Error::InvalidBatchSize {
                m,
                n,
                reason: "need 1 <= m <= n for a without-replacement batch".into(),
            });
        }
        let mut seen = vec![false; n];
        for &r in &rows {
            if r >= n {
                return Err(Error::IndexOutOfRange { index: r, bound: n });
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidBatchSize {
                    m,
                    n,
                    reason: format!("duplicate batch row {r}"),
                });
            }
        }
        let mut matrix = cross_dissim_matrix(kind, data, &rows, counter)?;
        let mut weights = vec![1.0; m];
        let mut debiased = false;
        match strategy {
            BatchStrategy::Unif => {}
            BatchStrategy::Debias => {
                for (j, &row) in rows.iter().enumerate() {
                    matrix.set(row, j, f64::INFINITY);
                }
                debiased = true;
            }
            BatchStrategy::Nniw => {
                // nearest batch column per dataset point, on the unweighted
                // matrix, ties to the smallest column index
                let mut counts = vec![0u64; m];
                for i in 0..n {
                    let mut best = 0usize;
                    let mut best_d = matrix.get(i, 0);
                    for j in 1..m {
                        let d = matrix.get(i, j);
                        if d < best_d {
                            best_d = d;
                            best = j;
                        }
                    }
                    counts[best] += 1;
                }
                debug_assert_eq!(counts.iter().sum::<u64>(), n as u64);
                for (j, &c) in counts.iter().enumerate() {
                    // a column no point maps to keeps the neutral unit weight
                    let w = if c == 0 { 1.0 } else { c as f64 };
                    weights[j] = w;
                    if w != 1.0 {
                        matrix.scale_column(j, w);
                    }
                }
            }
            BatchStrategy::Lwcs => unreachable!(),
        }
        Ok(BatchView {
            indices: rows,
            weights,
            matrix,
            debiased,
        })
    }
}

/// The `m = min(n, ceil(100 ln(k n)))` batch-size heuristic, never below 1.
pub fn default_batch_size(n: usize, k: usize) -> usize {
    let raw = (100.0 * ((k as f64) * (n as f64)).ln()).ceil();
    let m = if raw.is_finite() && raw > 0.0 {
        raw as usize
    } else {
        1
    };
    m.clamp(1, n)
}

/// Inputs to the minimum-batch-size bound: the data diameter under the
/// dissimilarity, the smallest objective gap between swaps, the allowed
/// failure probability, the number of swap steps, and the dataset size.
///
/// These values are user-supplied; nothing in this crate estimates the
/// diameter-to-gap ratio at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub max_dissim: f64,
    pub min_gap: f64,
    pub failure_prob: f64,
    pub swap_steps: u64,
    pub n: u64,
}

/// The smallest batch size guaranteeing, with probability at least
/// `1 - failure_prob`, that the single-batch search performs the same swaps
/// as the full-matrix search: `ceil((4 D^2 / gap^2) * ln(2 T n / delta))`.
pub fn guaranteed_min_batch_size(inputs: &BoundInputs) -> Result<u64> {
    let BoundInputs {
        max_dissim,
        min_gap,
        failure_prob,
        swap_steps,
        n,
    } = *inputs;
    if !(min_gap > 0.0 && min_gap.is_finite()) {
        return Err(Error::InvalidBound(format!(
            "objective gap must be positive and finite, got {min_gap}"
        )));
    }
    if !(failure_prob > 0.0 && failure_prob <= 1.0) {
        return Err(Error::InvalidBound(format!(
            "failure probability must lie in (0, 1], got {failure_prob}"
        )));
    }
    if !(max_dissim >= 0.0 && max_dissim.is_finite()) {
        return Err(Error::InvalidBound(format!(
            "max dissimilarity must be non-negative and finite, got {max_dissim}"
        )));
    }
    if swap_steps == 0 || n == 0 {
        return Err(Error::InvalidBound(
            "swap_steps and n must be positive".into(),
        ));
    }
    let log_term = (2.0 * swap_steps as f64 * n as f64 / failure_prob).ln();
    let value = 4.0 * max_dissim * max_dissim / (min_gap * min_gap) * log_term;
    Ok(value.ceil() as u64)
}

/// The lightweight-coreset sampling distribution: half the mass uniform,
/// half proportional to the squared Euclidean distance to the dataset mean.
/// Counts n evaluations (one point-to-mean distance per row). Degenerates
/// to uniform when every row equals the mean.
pub fn lwcs_sampling_distribution(data: &DataMatrix, counter: &mut EvalCounter) -> Vec<f64> {
    let n = data.n();
    let p = data.p();
    let mut mean = vec![0.0; p];
    for i in 0..n {
        for (d, v) in mean.iter_mut().zip(data.row(i)) {
            *d += v;
        }
    }
    for d in &mut mean {
        *d /= n as f64;
    }
    let mut sq = Vec::with_capacity(n);
    for i in 0..n {
        let row = data.row(i);
        let mut acc = 0.0;
        for d in 0..p {
            let diff = row[d] - mean[d];
            acc += diff * diff;
        }
        sq.push(acc);
    }
    counter.add(n as u64);
    let total: f64 = sq.iter().sum();
    if total == 0.0 {
        return vec![1.0 / n as f64; n];
    }
    sq.iter()
        .map(|&s| 0.5 / n as f64 + s / (2.0 * total))
        .collect()
}

/// Draws the batch and builds its weighted dissimilarity matrix.
///
/// Counts exactly `n * m` evaluations for the matrix, plus `n` for the
/// point-to-mean distances when the strategy is `Lwcs`.
pub fn sample_batch(
    data: &DataMatrix,
    m: usize,
    strategy: BatchStrategy,
    kind: Dissimilarity,
    seed: RandomSeed,
    counter: &mut EvalCounter,
) -> Result<BatchView> {
    let n = data.n();
    let mut rng = seed.rng();
    match strategy {
        BatchStrategy::Unif | BatchStrategy::Debias | BatchStrategy::Nniw => {
            if m == 0 || m > n {
                return Err(Error::InvalidBatchSize {
                    m,
                    n,
                    reason: "need 1 <= m <= n for a without-replacement batch".into(),
                });
            }
            let rows = rand::seq::index::sample(&mut rng, n, m).into_vec();
            BatchView::from_rows(data, rows, strategy, kind, counter)
        }
        BatchStrategy::Lwcs => {
            if m == 0 {
                return Err(Error::InvalidBatchSize {
                    m,
                    n,
                    reason: "need m >= 1".into(),
                });
            }
            let q = lwcs_sampling_distribution(data, counter);
            let mut cumulative = Vec::with_capacity(n);
            let mut acc = 0.0;
            for &qi in &q {
                acc += qi;
                cumulative.push(acc);
            }
            let total = acc;
            let mut rows = Vec::with_capacity(m);
            for _ in 0..m {
                let u = rng.random::<f64>() * total;
                let idx = cumulative.partition_point(|&c| c <= u).min(n - 1);
                rows.push(idx);
            }
            let mut matrix = cross_dissim_matrix(kind, data, &rows, counter)?;
            let mut weights = Vec::with_capacity(m);
            for (j, &row) in rows.iter().enumerate() {
                let w = 1.0 / (m as f64 * q[row]);
                weights.push(w);
                matrix.scale_column(j, w);
            }
            Ok(BatchView {
                indices: rows,
                weights,
                matrix,
                debiased: false,
            })
        }
    }
}
