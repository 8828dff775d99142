//! Dissimilarity kernels with an exact, queryable count of pairwise
//! evaluations.
//!
//! The evaluation count is the cost unit every algorithm in this crate is
//! compared on: one count per point pair, regardless of dimension.

use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// The dissimilarity kernel. Only L1 and L2 are metrics; squared-L2 and
/// cosine are admissible because the local search never relies on the
/// triangle inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dissimilarity {
    L1,
    L2,
    SquaredL2,
    Cosine,
}

impl Dissimilarity {
    pub fn name(self) -> &'static str {
        match self {
            Dissimilarity::L1 => "l1",
            Dissimilarity::L2 => "l2",
            Dissimilarity::SquaredL2 => "squared_l2",
            Dissimilarity::Cosine => "cosine",
        }
    }
}

impl std::str::FromStr for Dissimilarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Dissimilarity::L1),
            "l2" => Ok(Dissimilarity::L2),
            "squared_l2" | "squared-l2" | "sql2" => Ok(Dissimilarity::SquaredL2),
            "cosine" => Ok(Dissimilarity::Cosine),
            other => Err(Error::InvalidConfig(format!(
                "unknown dissimilarity {other:?} (expected l1, l2, squared_l2, or cosine)"
            ))),
        }
    }
}

/// Counts single-pair dissimilarity evaluations. Monotone non-decreasing;
/// exactly one count per pair evaluated.
#[derive(Debug, Default, Clone)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    #[inline]
    pub(crate) fn add(&mut self, pairs: u64) {
        self.count += pairs;
    }
}

#[inline]
fn pair_l1(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        acc += (a[i] - b[i]).abs();
    }
    acc
}

#[inline]
fn pair_sq_l2(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        acc += d * d;
    }
    acc
}

#[inline]
fn pair_cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for i in 0..a.len() {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    // clamp rounding noise so the kernel stays non-negative
    Ok((1.0 - dot / (na.sqrt() * nb.sqrt())).max(0.0))
}

#[inline]
fn pair(kind: Dissimilarity, a: &[f64], b: &[f64]) -> Result<f64> {
    match kind {
        Dissimilarity::L1 => Ok(pair_l1(a, b)),
        Dissimilarity::L2 => Ok(pair_sq_l2(a, b).sqrt()),
        Dissimilarity::SquaredL2 => Ok(pair_sq_l2(a, b)),
        Dissimilarity::Cosine => pair_cosine(a, b),
    }
}

/// Evaluates one pair and counts it. Feature accumulation runs in ascending
/// index order, so results are bit-reproducible.
pub fn dissim(kind: Dissimilarity, a: &[f64], b: &[f64], counter: &mut EvalCounter) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let value = pair(kind, a, b)?;
    counter.add(1);
    Ok(value)
}

/// A dense rows-by-cols matrix of dissimilarities between every dataset row
/// and a selected set of column rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl CrossMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.values[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.values[i * self.cols + j] = value;
    }

    /// Multiplies column `j` by `factor`.
    pub(crate) fn scale_column(&mut self, j: usize, factor: f64) {
        for i in 0..self.rows {
            self.values[i * self.cols + j] *= factor;
        }
    }
}

/// Computes the n-by-m matrix of dissimilarities between every row of `data`
/// and the rows listed in `column_rows`. Counts exactly `n * m` evaluations.
pub fn cross_dissim_matrix(
    kind: Dissimilarity,
    data: &DataMatrix,
    column_rows: &[usize],
    counter: &mut EvalCounter,
) -> Result<CrossMatrix> {
    let n = data.n();
    let m = column_rows.len();
    for &c in column_rows {
        if c >= n {
            return Err(Error::IndexOutOfRange { index: c, bound: n });
        }
    }
    let mut values = Vec::with_capacity(n * m);
    for i in 0..n {
        let a = data.row(i);
        for &c in column_rows {
            values.push(pair(kind, a, data.row(c))?);
        }
    }
    counter.add((n * m) as u64);
    Ok(CrossMatrix {
        rows: n,
        cols: m,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counter() -> EvalCounter {
        EvalCounter::new()
    }

    #[test]
    fn l1_hand_value() {
        let v = dissim(Dissimilarity::L1, &[0.0, 0.0], &[3.0, 4.0], &mut counter()).unwrap();
        assert_eq!(v, 7.0);
    }

    #[test]
    fn l2_hand_value() {
        let v = dissim(Dissimilarity::L2, &[0.0, 0.0], &[3.0, 4.0], &mut counter()).unwrap();
        assert_eq!(v, 5.0);
    }

    #[test]
    fn self_distance_zero() {
        let x = [1.5, -2.0, 0.25];
        for kind in [Dissimilarity::L1, Dissimilarity::L2, Dissimilarity::SquaredL2] {
            assert_eq!(dissim(kind, &x, &x, &mut counter()).unwrap(), 0.0);
        }
        // cosine self-dissimilarity is zero up to rounding, clamped at zero
        let v = dissim(Dissimilarity::Cosine, &x, &x, &mut counter()).unwrap();
        assert!((0.0..1e-12).contains(&v));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            dissim(Dissimilarity::L1, &[0.0], &[0.0, 1.0], &mut counter()),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn cosine_zero_vector() {
        assert!(matches!(
            dissim(Dissimilarity::Cosine, &[0.0, 0.0], &[1.0, 0.0], &mut counter()),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn dissim_counts_one_per_pair() {
        let mut c = counter();
        dissim(Dissimilarity::L1, &[0.0], &[1.0], &mut c).unwrap();
        dissim(Dissimilarity::L1, &[0.0], &[2.0], &mut c).unwrap();
        assert_eq!(c.count(), 2);
    }

    #[test]
    fn cross_matrix_hand_values() {
        let data = DataMatrix::new(3, 1, vec![0.0, 1.0, 5.0]).unwrap();
        let mut c = counter();
        let m = cross_dissim_matrix(Dissimilarity::L1, &data, &[0, 2], &mut c).unwrap();
        assert_eq!(c.count(), 6);
        let expected = [[0.0, 5.0], [1.0, 4.0], [5.0, 0.0]];
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(m.get(i, j), expected[i][j]);
            }
        }
    }

    #[test]
    fn cross_matrix_full_is_symmetric_with_zero_diagonal() {
        let data = DataMatrix::new(4, 2, vec![0.0, 0.0, 1.0, 2.0, -3.0, 0.5, 2.0, 2.0]).unwrap();
        let cols: Vec<usize> = (0..4).collect();
        let m = cross_dissim_matrix(Dissimilarity::L2, &data, &cols, &mut counter()).unwrap();
        for i in 0..4 {
            assert_eq!(m.get(i, i), 0.0);
            for j in 0..4 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
    }

    #[test]
    fn cross_matrix_counting_contract() {
        let data = DataMatrix::new(100, 1, (0..100).map(|i| i as f64).collect()).unwrap();
        let mut c = counter();
        cross_dissim_matrix(Dissimilarity::L1, &data, &[0, 10, 20, 30, 40, 50, 60], &mut c)
            .unwrap();
        assert_eq!(c.count(), 700);
    }

    #[test]
    fn cross_matrix_index_out_of_range() {
        let data = DataMatrix::new(2, 1, vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            cross_dissim_matrix(Dissimilarity::L1, &data, &[2], &mut counter()),
            Err(Error::IndexOutOfRange { index: 2, bound: 2 })
        ));
    }

    proptest! {
        #[test]
        fn symmetry_and_non_negativity(
            a in proptest::collection::vec(-100.0f64..100.0, 4),
            b in proptest::collection::vec(-100.0f64..100.0, 4),
        ) {
            for kind in [
                Dissimilarity::L1,
                Dissimilarity::L2,
                Dissimilarity::SquaredL2,
                Dissimilarity::Cosine,
            ] {
                let ab = dissim(kind, &a, &b, &mut counter());
                let ba = dissim(kind, &b, &a, &mut counter());
                if let (Ok(ab), Ok(ba)) = (ab, ba) {
                    prop_assert!(ab >= 0.0);
                    prop_assert_eq!(ab, ba);
                }
            }
        }

        #[test]
        fn triangle_inequality_for_metrics(
            a in proptest::collection::vec(-100.0f64..100.0, 3),
            b in proptest::collection::vec(-100.0f64..100.0, 3),
            c in proptest::collection::vec(-100.0f64..100.0, 3),
        ) {
            for kind in [Dissimilarity::L1, Dissimilarity::L2] {
                let ab = dissim(kind, &a, &b, &mut counter()).unwrap();
                let bc = dissim(kind, &b, &c, &mut counter()).unwrap();
                let ac = dissim(kind, &a, &c, &mut counter()).unwrap();
                prop_assert!(ac <= ab + bc + 1e-9);
            }
        }
    }
}
