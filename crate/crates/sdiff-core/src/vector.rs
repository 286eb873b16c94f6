//! Dense vectors and top-s machinery.
//!
//! `top_s_split` ranks coordinates by descending absolute value with ties
//! broken by ascending index, so every truncation in the crate is
//! deterministic and reproducible. When several coordinates share the
//! boundary magnitude the split (and everything downstream of it) is one
//! canonical choice among several equally valid ones.

use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite vector in R^N, N >= 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DenseVector {
    data: Vec<f64>,
}

impl DenseVector {
    /// Validates that the data is non-empty and every entry is finite.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::param("vector dimension must be >= 1"));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(format!("non-finite entry at index {i}")));
        }
        Ok(Self { data })
    }

    /// Unvalidated construction. Solver internals may hold transient
    /// non-finite values; the divergence guards surface those as errors.
    pub(crate) fn from_raw(data: Vec<f64>) -> Self {
        debug_assert!(!data.is_empty());
        Self { data }
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "vector dimension must be >= 1");
        Self { data: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm_l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_l2_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.norm_l2_sq().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Number of nonzero entries (exact zero test).
    pub fn norm_l0(&self) -> usize {
        self.data.iter().filter(|v| **v != 0.0).count()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// self - other, elementwise.
    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self::from_raw(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self::from_raw(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_raw(self.data.iter().map(|v| c * v).collect())
    }

    /// self + c * other.
    pub fn axpy(&self, c: f64, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self::from_raw(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + c * b)
                .collect(),
        )
    }

    pub fn dist_l2(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl Deref for DenseVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.data
    }
}

impl<'a> IntoIterator for &'a DenseVector {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;
    fn into_iter(self) -> Self::IntoIter {
        self.data.iter()
    }
}

/// Partition of {0, .., N-1} into the s largest-magnitude coordinates of a
/// vector and the rest, together with the full magnitude ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopSSplit {
    ranking: Vec<usize>,
    s: usize,
}

impl TopSSplit {
    /// Indices of the s largest-|y| coordinates, in rank order.
    pub fn top_indices(&self) -> &[usize] {
        &self.ranking[..self.s]
    }

    /// The complement, in rank order.
    pub fn rest_indices(&self) -> &[usize] {
        &self.ranking[self.s..]
    }

    /// Full ranking pi: ranking[k] is the index of the (k+1)-th largest |y|.
    pub fn permutation(&self) -> &[usize] {
        &self.ranking
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.ranking.len()
    }

    /// Boolean membership mask for the top set.
    pub fn top_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.ranking.len()];
        for &i in self.top_indices() {
            mask[i] = true;
        }
        mask
    }
}

/// Ranks the coordinates of `y` by descending absolute value (ties broken by
/// ascending index) and splits after the first `s`.
pub fn top_s_split(y: &DenseVector, s: usize) -> Result<TopSSplit> {
    let n = y.len();
    if s < 1 || s > n {
        return Err(Error::param(format!(
            "sparsity level s={s} out of range 1..={n}"
        )));
    }
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.sort_by(|&i, &j| y[j].abs().total_cmp(&y[i].abs()).then_with(|| i.cmp(&j)));
    Ok(TopSSplit { ranking, s })
}

/// Best s-term approximation y^s: keeps the top-s coordinates, zeroes the rest.
pub fn truncate(y: &DenseVector, s: usize) -> Result<DenseVector> {
    let split = top_s_split(y, s)?;
    Ok(truncate_with(y, &split))
}

/// Truncation reusing an existing split of the same vector.
pub fn truncate_with(y: &DenseVector, split: &TopSSplit) -> DenseVector {
    debug_assert_eq!(split.dim(), y.len());
    let mut out = vec![0.0; y.len()];
    for &i in split.top_indices() {
        out[i] = y[i];
    }
    DenseVector::from_raw(out)
}
