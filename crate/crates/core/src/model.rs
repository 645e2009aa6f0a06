//! Signals, supports and correlation profiles.
//!
//! Indices are 0-based throughout; only human-readable output converts to
//! 1-based positions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{norm2, DenseMatrix};

/// Strictly increasing set of column indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Sorts and deduplicates the indices and checks them against `ambient`,
    /// the number of columns of the matrix the support refers to.
    pub fn new(mut indices: Vec<usize>, ambient: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.last().filter(|&&i| i >= ambient) {
            return Err(Error::InvalidArgument(format!(
                "support index {bad} out of range for dimension {ambient}"
            )));
        }
        Ok(Self(indices))
    }

    /// `{0, 1, …, k−1}`.
    pub fn leading(k: usize) -> Self {
        Self((0..k).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Inserts `i`, keeping the order. Returns false if it was present.
    pub fn insert(&mut self, i: usize) -> bool {
        match self.0.binary_search(&i) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, i);
                true
            }
        }
    }

    /// Indices rendered 1-based, e.g. `{1, 3}`.
    pub fn display_one_based(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// A dense signal together with its exact support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSignal {
    entries: Vec<f64>,
    support: Support,
}

impl SparseSignal {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("signal must be nonempty".into()));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("signal has non-finite entries".into()));
        }
        let support = Support(
            entries
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, _)| i)
                .collect(),
        );
        Ok(Self { entries, support })
    }

    /// Places `values` on `support` inside a length-`n` zero vector.
    /// Zero values are dropped from the support.
    pub fn from_support(n: usize, support: &Support, values: &[f64]) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a support of size {}",
                values.len(),
                support.len()
            )));
        }
        if support.indices().last().is_some_and(|&i| i >= n) {
            return Err(Error::DimensionMismatch(format!(
                "support exceeds signal length {n}"
            )));
        }
        let mut entries = vec![0.0; n];
        for (&i, &v) in support.indices().iter().zip(values) {
            entries[i] = v;
        }
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    /// ‖x‖₀
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        norm2(&self.entries)
    }
}

/// Column correlations `⟨A e_i, v⟩` and their largest magnitude over a
/// declared support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationProfile {
    pub values: Vec<f64>,
    /// max over the support of `|values[i]|`; zero for an empty support
    pub s0: f64,
    pub s0_argmax: Vec<usize>,
}

impl CorrelationProfile {
    /// Largest `|values[i]|` over indices outside `support`.
    pub fn max_off_support(&self, support: &Support) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| !support.contains(*i))
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max)
    }
}

/// `y = A x`.
pub fn apply(a: &DenseMatrix, x: &[f64]) -> Result<Vec<f64>> {
    a.mul_vec(x)
}

pub fn correlations(a: &DenseMatrix, v: &[f64], support: &Support) -> Result<CorrelationProfile> {
    if support.indices().last().is_some_and(|&i| i >= a.cols()) {
        return Err(Error::DimensionMismatch(format!(
            "support exceeds {} columns",
            a.cols()
        )));
    }
    let values = a.tr_mul_vec(v)?;
    let s0 = support
        .indices()
        .iter()
        .map(|&i| values[i].abs())
        .fold(0.0, f64::max);
    let s0_argmax = support
        .indices()
        .iter()
        .copied()
        .filter(|&i| values[i].abs() == s0)
        .collect();
    Ok(CorrelationProfile {
        values,
        s0,
        s0_argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thm2_k2() -> DenseMatrix {
        DenseMatrix::from_rows(&[
            [1.0, 0.0, 0.5],
            [0.0, 1.0, 0.5],
            [0.0, 0.0, 0.5f64.sqrt()],
        ])
        .unwrap()
    }

    #[test]
    fn support_is_sorted_and_checked() {
        let s = Support::new(vec![3, 1, 3], 5).unwrap();
        assert_eq!(s.indices(), &[1, 3]);
        assert!(Support::new(vec![5], 5).is_err());
        assert_eq!(s.display_one_based(), "{2, 4}");
    }

    #[test]
    fn signal_support_matches_nonzeros() {
        let x = SparseSignal::new(vec![0.0, -2.0, 0.0, 1.0]).unwrap();
        assert_eq!(x.support().indices(), &[1, 3]);
        assert_eq!(x.sparsity(), 2);
        assert_eq!(x.l1_norm(), 3.0);
        assert!((x.l2_norm() - 5f64.sqrt()).abs() < 1e-15);
        let y = SparseSignal::from_support(4, &Support::leading(2), &[1.0, 0.0]).unwrap();
        assert_eq!(y.support().indices(), &[0]);
    }

    #[test]
    fn apply_counterexample() {
        assert_eq!(apply(&thm2_k2(), &[1.0, 1.0, 0.0]).unwrap(), vec![1.0, 1.0, 0.0]);
        assert_eq!(
            apply(&DenseMatrix::identity(3), &[4.0, 5.0, 6.0]).unwrap(),
            vec![4.0, 5.0, 6.0]
        );
        assert!(apply(&thm2_k2(), &[1.0]).is_err());
    }

    #[test]
    fn correlations_counterexample() {
        let a = thm2_k2();
        let y = apply(&a, &[1.0, 1.0, 0.0]).unwrap();
        let p = correlations(&a, &y, &Support::leading(2)).unwrap();
        assert_eq!(p.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(p.s0, 1.0);
        assert_eq!(p.s0_argmax, vec![0, 1]);
        assert_eq!(p.max_off_support(&Support::leading(2)), 1.0);
    }

    #[test]
    fn correlations_of_zero_vector() {
        let p = correlations(&thm2_k2(), &[0.0; 3], &Support::leading(3)).unwrap();
        assert_eq!(p.values, vec![0.0; 3]);
        assert_eq!(p.s0, 0.0);
        assert!(correlations(&thm2_k2(), &[0.0; 2], &Support::empty()).is_err());
    }
}
