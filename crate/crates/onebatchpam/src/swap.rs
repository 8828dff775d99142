//! The single-batch PAM local search: neighbor caches, the O(m + k)
//! swap-gain scan, eager swap passes, and the run drivers. The full-matrix
//! search is the `m = n` special case of the same engine.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::batch::{default_batch_size, sample_batch, BatchStrategy, BatchView};
use crate::data::{DataMatrix, RandomSeed};
use crate::dissimilarity::{dissim, Dissimilarity, EvalCounter};
use crate::error::{Error, Result};

/// k distinct dataset row indices, in slot order. Slot order matters: swap
/// decisions are reported per slot and ties break to the smallest slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MedoidSet {
    slots: Vec<usize>,
}

impl MedoidSet {
    /// Validates distinctness and range.
    pub fn new(rows: Vec<usize>, n: usize) -> Result<Self> {
        let k = rows.len();
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, n });
        }
        let mut seen = vec![false; n];
        for &r in &rows {
            if r >= n {
                return Err(Error::IndexOutOfRange { index: r, bound: n });
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidK { k, n });
            }
        }
        Ok(Self { slots: rows })
    }

    /// A uniform random k-subset of `[0, n)`.
    pub fn random(n: usize, k: usize, rng: &mut impl Rng) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, n });
        }
        Ok(Self {
            slots: rand::seq::index::sample(rng, n, k).into_vec(),
        })
    }

    pub fn k(&self) -> usize {
        self.slots.len()
    }

    pub fn rows(&self) -> &[usize] {
        &self.slots
    }

    pub fn row(&self, slot: usize) -> usize {
        self.slots[slot]
    }

    pub fn contains(&self, row: usize) -> bool {
        self.slots.contains(&row)
    }

    fn replace(&mut self, slot: usize, row: usize) {
        self.slots[slot] = row;
    }
}

/// Per-column nearest/second-nearest medoid bookkeeping plus per-slot
/// removal gains, kept consistent with one `MedoidSet` over one batch.
///
/// Removal gains are the per-slot sums of `d_near - d_sec`, always <= 0.
/// Columns whose second-nearest distance is infinite (a debiased batch with
/// k = 2 and a medoid inside the batch) cannot be folded into a finite sum,
/// so they are tallied separately and the scan handles them explicitly;
/// their slot's removal gain is minus infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborCache {
    near: Vec<u32>,
    sec: Vec<u32>,
    d_near: Vec<f64>,
    d_sec: Vec<f64>,
    gain_finite: Vec<f64>,
    inf_sec: Vec<u32>,
    sum_near: f64,
}

impl NeighborCache {
    /// Builds the cache from scratch. Requires k >= 2 (a single medoid has
    /// no second-nearest).
    pub fn build(batch: &BatchView, medoids: &MedoidSet) -> Result<Self> {
        let k = medoids.k();
        let n = batch.n();
        if k < 2 {
            return Err(Error::InvalidK { k, n });
        }
        for &r in medoids.rows() {
            if r >= n {
                return Err(Error::IndexOutOfRange { index: r, bound: n });
            }
        }
        let m = batch.len();
        let mut cache = NeighborCache {
            near: vec![0; m],
            sec: vec![0; m],
            d_near: vec![0.0; m],
            d_sec: vec![0.0; m],
            gain_finite: vec![0.0; k],
            inf_sec: vec![0; k],
            sum_near: 0.0,
        };
        cache.rebuild(batch, medoids);
        Ok(cache)
    }

    fn rebuild(&mut self, batch: &BatchView, medoids: &MedoidSet) {
        let mat = batch.matrix();
        let k = medoids.k();
        let m = batch.len();
        self.gain_finite.clear();
        self.gain_finite.resize(k, 0.0);
        self.inf_sec.clear();
        self.inf_sec.resize(k, 0);
        let mut sum_near = 0.0;
        for j in 0..m {
            let d0 = mat.get(medoids.row(0), j);
            let d1 = mat.get(medoids.row(1), j);
            let (mut near, mut dn, mut sec, mut ds) = if d1 < d0 {
                (1usize, d1, 0usize, d0)
            } else {
                (0usize, d0, 1usize, d1)
            };
            for l in 2..k {
                let d = mat.get(medoids.row(l), j);
                if d < dn {
                    sec = near;
                    ds = dn;
                    near = l;
                    dn = d;
                } else if d < ds {
                    sec = l;
                    ds = d;
                }
            }
            self.near[j] = near as u32;
            self.sec[j] = sec as u32;
            self.d_near[j] = dn;
            self.d_sec[j] = ds;
            sum_near += dn;
            if ds.is_finite() {
                self.gain_finite[near] += dn - ds;
            } else {
                self.inf_sec[near] += 1;
            }
        }
        self.sum_near = sum_near;
    }

    pub fn near(&self) -> &[u32] {
        &self.near
    }

    pub fn sec(&self) -> &[u32] {
        &self.sec
    }

    pub fn d_near(&self) -> &[f64] {
        &self.d_near
    }

    pub fn d_sec(&self) -> &[f64] {
        &self.d_sec
    }

    /// The gain of deleting slot `l` (every column served by `l` falls back
    /// to its second-nearest medoid). Minus infinity when some column has no
    /// finite fallback.
    pub fn removal_gain(&self, slot: usize) -> f64 {
        if self.inf_sec[slot] > 0 {
            f64::NEG_INFINITY
        } else {
            self.gain_finite[slot]
        }
    }

    /// Sum of the per-column nearest distances, i.e. m times the batch
    /// objective estimate.
    pub fn estimate_sum(&self) -> f64 {
        self.sum_near
    }
}

/// The batch objective estimate in mean form: the average over batch
/// columns of the (weighted) distance to the nearest medoid. Evaluated
/// directly from the matrix, independent of any cache.
pub fn estimated_objective(batch: &BatchView, medoids: &MedoidSet) -> Result<f64> {
    let mat = batch.matrix();
    let m = batch.len();
    let mut sum = 0.0;
    for j in 0..m {
        let mut best = f64::INFINITY;
        for &row in medoids.rows() {
            let d = mat.get(row, j);
            if d < best {
                best = d;
            }
        }
        sum += best;
    }
    let value = sum / m as f64;
    if !value.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(value)
}

/// The exact objective: mean dissimilarity from every dataset point to its
/// nearest medoid. Counts exactly `n * k` evaluations.
pub fn exact_objective(
    data: &DataMatrix,
    medoids: &MedoidSet,
    kind: Dissimilarity,
    counter: &mut EvalCounter,
) -> Result<f64> {
    let n = data.n();
    let mut sum = 0.0;
    for i in 0..n {
        let point = data.row(i);
        let mut best = f64::INFINITY;
        for &row in medoids.rows() {
            let d = dissim(kind, point, data.row(row), counter)?;
            if d < best {
                best = d;
            }
        }
        sum += best;
    }
    Ok(sum / n as f64)
}

/// For every slot l, the batch-estimate gain of the swap "remove slot l,
/// add `candidate_row`", in sum form: m times the estimate decrease.
///
/// Per-slot values start from the removal gains and are corrected column by
/// column, with a shared term for columns the candidate takes over outright.
pub fn swap_slot_gains(batch: &BatchView, cache: &NeighborCache, candidate_row: usize) -> Vec<f64> {
    let mat = batch.matrix();
    let m = batch.len();
    let mut gains = cache.gain_finite.clone();
    let mut shared = 0.0;
    for j in 0..m {
        let dij = mat.get(candidate_row, j);
        let dn = cache.d_near[j];
        let ds = cache.d_sec[j];
        let near = cache.near[j] as usize;
        if ds.is_finite() {
            if dij < dn {
                shared += dn - dij;
                gains[near] += ds - dn;
            } else if dij < ds {
                gains[near] += ds - dij;
            }
        } else if dij < dn {
            // candidate takes the column over; the slot owes nothing beyond
            // the shared term
            shared += dn - dij;
        } else {
            // removing the nearest medoid leaves the column to the candidate
            gains[near] += dn - dij;
        }
    }
    for g in &mut gains {
        *g += shared;
    }
    gains
}

/// The best swap for one candidate: `(slot, gain)` maximizing the batch
/// estimate decrease, ties to the smallest slot. The gain satisfies
/// `gain = m * (estimate(medoids) - estimate(medoids with the swap))`.
pub fn swap_gain_scan(
    batch: &BatchView,
    medoids: &MedoidSet,
    cache: &NeighborCache,
    candidate_row: usize,
) -> Result<(usize, f64)> {
    if candidate_row >= batch.n() {
        return Err(Error::IndexOutOfRange {
            index: candidate_row,
            bound: batch.n(),
        });
    }
    if medoids.contains(candidate_row) {
        return Err(Error::CandidateIsMedoid { row: candidate_row });
    }
    let gains = swap_slot_gains(batch, cache, candidate_row);
    let mut best_slot = 0;
    let mut best = gains[0];
    for (slot, &g) in gains.iter().enumerate().skip(1) {
        if g > best {
            best = g;
            best_slot = slot;
        }
    }
    Ok((best_slot, best))
}

/// Replaces `slot` with `new_row` and restores cache consistency.
pub fn apply_swap(
    batch: &BatchView,
    medoids: &mut MedoidSet,
    cache: &mut NeighborCache,
    slot: usize,
    new_row: usize,
) -> Result<()> {
    if slot >= medoids.k() {
        return Err(Error::IndexOutOfRange {
            index: slot,
            bound: medoids.k(),
        });
    }
    if new_row >= batch.n() {
        return Err(Error::IndexOutOfRange {
            index: new_row,
            bound: batch.n(),
        });
    }
    if medoids.contains(new_row) {
        return Err(Error::CandidateIsMedoid { row: new_row });
    }
    medoids.replace(slot, new_row);
    cache.rebuild(batch, medoids);
    Ok(())
}

/// Relative gain below which a swap is treated as numerically neutral.
///
/// Exactly tied swaps are generic, not exotic: under L1 in one dimension the
/// objective is flat between the two middle points a medoid serves, so two
/// candidates can tie to the last bit in real arithmetic while the decomposed
/// gain evaluates to rounding noise of either sign (and the sign need not
/// survive a weight rescaling). Gains are therefore required to clear this
/// fraction of the current estimate sum before a swap is attempted.
pub const MIN_RELATIVE_GAIN: f64 = 1e-12;

/// One pass over all candidate rows. A swap is attempted when its gain
/// exceeds `max(epsilon, MIN_RELATIVE_GAIN)` times the current estimate sum
/// and kept only if applying it strictly decreases the estimate (a neutral
/// swap is reverted). With `eager` every accepted swap is applied
/// immediately and the pass continues; otherwise only the single best swap
/// of the pass is applied. Returns the number of swaps performed.
pub fn run_swap_pass(
    batch: &BatchView,
    medoids: &mut MedoidSet,
    cache: &mut NeighborCache,
    eager: bool,
    epsilon: f64,
) -> usize {
    let n = batch.n();
    let rel = epsilon.max(MIN_RELATIVE_GAIN);
    let mut swaps = 0;
    let try_swap = |medoids: &mut MedoidSet, cache: &mut NeighborCache, slot, row, gain: f64| {
        let before = cache.estimate_sum();
        let old_row = medoids.row(slot);
        apply_swap(batch, medoids, cache, slot, row).expect("swap validated by the scan");
        if cache.estimate_sum() < before {
            debug_assert!(
                (before - gain - cache.estimate_sum()).abs() <= 1e-9 * before.abs().max(1.0),
                "accepted swap must decrease the estimate sum by its gain"
            );
            true
        } else {
            apply_swap(batch, medoids, cache, slot, old_row).expect("revert restores a valid set");
            false
        }
    };
    if eager {
        for i in 0..n {
            if medoids.contains(i) {
                continue;
            }
            let (slot, gain) = swap_gain_scan(batch, medoids, cache, i)
                .expect("candidate validated by the loop");
            if gain > rel * cache.estimate_sum() && try_swap(medoids, cache, slot, i, gain) {
                swaps += 1;
            }
        }
    } else {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            if medoids.contains(i) {
                continue;
            }
            let (slot, gain) = swap_gain_scan(batch, medoids, cache, i)
                .expect("candidate validated by the loop");
            if best.is_none_or(|(g, _, _)| gain > g) {
                best = Some((gain, slot, i));
            }
        }
        if let Some((gain, slot, row)) = best {
            if gain > rel * cache.estimate_sum() && try_swap(medoids, cache, slot, row, gain) {
                swaps = 1;
            }
        }
    }
    swaps
}

/// The row minimizing the batch-estimated 1-medoid objective, over all
/// dataset rows, ties to the smallest index. Not meaningful for debiased
/// batches (the run drivers reject that combination).
pub fn one_medoid(batch: &BatchView) -> usize {
    let mat = batch.matrix();
    let mut best_row = 0;
    let mut best_sum = f64::INFINITY;
    for i in 0..batch.n() {
        let mut sum = 0.0;
        for j in 0..batch.len() {
            sum += mat.get(i, j);
        }
        if sum < best_sum {
            best_sum = sum;
            best_row = i;
        }
    }
    best_row
}

/// Outcome of one clustering run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    /// Final medoid rows, in slot order.
    pub medoids: Vec<usize>,
    /// The objective value the algorithm itself tracked, in mean form. For
    /// the single-batch search this is the batch estimate; for algorithms
    /// that evaluate on the full dataset it equals the exact objective; pure
    /// seeding algorithms that never evaluate an objective report 0 here
    /// unless an exact evaluation was requested.
    pub est_objective: f64,
    /// The exact objective over all n points, when computed.
    pub exact_objective: Option<f64>,
    pub swaps: u64,
    pub passes: u64,
    /// Pairwise dissimilarity evaluations performed by this run.
    pub dissim_evals: u64,
    pub wall_millis: f64,
}

/// Parameters for the single-batch run driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneBatchConfig {
    pub k: usize,
    pub dissimilarity: Dissimilarity,
    pub strategy: BatchStrategy,
    /// Batch size; `None` applies the `100 ln(kn)` heuristic.
    pub batch_size: Option<usize>,
    pub max_passes: usize,
    pub epsilon: f64,
    pub evaluate_exact: bool,
}

impl OneBatchConfig {
    pub fn new(k: usize, dissimilarity: Dissimilarity) -> Self {
        OneBatchConfig {
            k,
            dissimilarity,
            strategy: BatchStrategy::Unif,
            batch_size: None,
            max_passes: 10,
            epsilon: 0.0,
            evaluate_exact: false,
        }
    }
}

/// Runs the single-batch local search: sample the batch once, initialize
/// medoids uniformly at random, then eager swap passes until a pass performs
/// no swap or `max_passes` is reached.
///
/// Evaluation budget: `n * m` for the batch matrix (plus `n` point-to-mean
/// distances for the lightweight-coreset strategy, plus `n * k` when the
/// exact objective is requested). No evaluation depends on the number of
/// swaps.
pub fn one_batch_pam(
    data: &DataMatrix,
    cfg: &OneBatchConfig,
    seed: RandomSeed,
    counter: &mut EvalCounter,
) -> Result<RunResult> {
    let start = Instant::now();
    let evals_start = counter.count();
    let n = data.n();
    let k = cfg.k;
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if k == 1 && cfg.strategy == BatchStrategy::Debias {
        return Err(Error::DebiasRequiresKAtLeast2);
    }
    if !(cfg.epsilon >= 0.0 && cfg.epsilon.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "epsilon must be finite and non-negative, got {}",
            cfg.epsilon
        )));
    }
    let mut rng = seed.rng();
    let batch_seed = RandomSeed(rng.random());
    let m = cfg.batch_size.unwrap_or_else(|| default_batch_size(n, k));
    let batch = sample_batch(data, m, cfg.strategy, cfg.dissimilarity, batch_seed, counter)?;

    let (medoids, est_objective, swaps, passes) = if k == 1 {
        let row = one_medoid(&batch);
        let medoids = MedoidSet::new(vec![row], n)?;
        let est = estimated_objective(&batch, &medoids)?;
        (medoids, est, 0u64, 1u64)
    } else {
        let mut medoids = MedoidSet::random(n, k, &mut rng)?;
        let mut cache = NeighborCache::build(&batch, &medoids)?;
        let mut swaps = 0u64;
        let mut passes = 0u64;
        for _ in 0..cfg.max_passes {
            passes += 1;
            let pass_swaps = run_swap_pass(&batch, &mut medoids, &mut cache, true, cfg.epsilon);
            swaps += pass_swaps as u64;
            if pass_swaps == 0 {
                break;
            }
        }
        let est = cache.estimate_sum() / m as f64;
        (medoids, est, swaps, passes)
    };

    let exact = if cfg.evaluate_exact {
        Some(exact_objective(data, &medoids, cfg.dissimilarity, counter)?)
    } else {
        None
    };
    Ok(RunResult {
        medoids: medoids.rows().to_vec(),
        est_objective,
        exact_objective: exact,
        swaps,
        passes,
        dissim_evals: counter.count() - evals_start,
        wall_millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// The full-matrix local search: the `m = n` uniform special case. The batch
/// estimate then equals the exact objective, which is reported without
/// further evaluations; the budget is exactly `n^2`.
pub fn faster_pam(
    data: &DataMatrix,
    k: usize,
    kind: Dissimilarity,
    max_passes: usize,
    seed: RandomSeed,
    counter: &mut EvalCounter,
) -> Result<RunResult> {
    let cfg = OneBatchConfig {
        k,
        dissimilarity: kind,
        strategy: BatchStrategy::Unif,
        batch_size: Some(data.n()),
        max_passes,
        epsilon: 0.0,
        evaluate_exact: false,
    };
    let mut result = one_batch_pam(data, &cfg, seed, counter)?;
    result.exact_objective = Some(result.est_objective);
    Ok(result)
}
