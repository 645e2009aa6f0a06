//! Orthogonal Matching Pursuit.
//!
//! Each iteration picks the column most correlated with the current residual,
//! adds it to the selected set, refits all selected coefficients by least
//! squares and recomputes the residual. The argmax is set-valued when several
//! correlations tie; [`TieBreakPolicy`] makes the resolution explicit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{correlations, SparseSignal, Support};
use crate::numerics::{least_squares, norm2, DenseMatrix};

/// Correlations within this absolute distance of the maximum magnitude are
/// considered tied.
pub const TIE_TOLERANCE: f64 = 1e-12;
/// OMP stops early once `‖r‖₂ ≤ EARLY_EXIT_TOLERANCE · ‖y‖₂`.
pub const EARLY_EXIT_TOLERANCE: f64 = 1e-12;
/// Relative coefficient error accepted by [`recovers`].
pub const RECOVERY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TieBreakPolicy {
    LowestIndex,
    HighestIndex,
    /// Prefer a tied index outside `support`; fall back to the lowest index.
    AdversarialOffSupport { support: Support },
}

impl TieBreakPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LowestIndex => "lowest",
            Self::HighestIndex => "highest",
            Self::AdversarialOffSupport { .. } => "adversarial",
        }
    }
}

/// Outcome of a single argmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub index: usize,
    pub tie_detected: bool,
}

pub fn select_index(values: &[f64], excluded: &Support, policy: &TieBreakPolicy) -> Result<Selection> {
    let candidates = || {
        values
            .iter()
            .enumerate()
            .filter(|(i, _)| !excluded.contains(*i))
            .map(|(i, v)| (i, v.abs()))
    };
    let max = candidates()
        .map(|(_, v)| v)
        .reduce(f64::max)
        .ok_or_else(|| Error::InvalidArgument("every index is excluded".into()))?;
    let tied: Vec<usize> = candidates()
        .filter(|&(_, v)| max - v <= TIE_TOLERANCE)
        .map(|(i, _)| i)
        .collect();
    let lowest = tied[0];
    let index = match policy {
        TieBreakPolicy::LowestIndex => lowest,
        TieBreakPolicy::HighestIndex => *tied.last().unwrap(),
        TieBreakPolicy::AdversarialOffSupport { support } => tied
            .iter()
            .copied()
            .find(|&i| !support.contains(i))
            .unwrap_or(lowest),
    };
    Ok(Selection {
        index,
        tie_detected: tied.len() > 1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmpIteration {
    /// 1-based iteration number
    pub iteration: usize,
    pub selected_index: usize,
    /// correlations of every column with the residual entering this iteration
    pub correlation_values: Vec<f64>,
    /// `|correlation_values[selected_index]|`
    pub max_correlation: f64,
    pub tie_detected: bool,
    /// residual norm after the refit
    pub residual_norm: f64,
    pub rank_deficient: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmpTrace {
    pub iterations: Vec<OmpIteration>,
    pub final_estimate: Vec<f64>,
    pub final_support: Support,
    /// selected indices in order of selection
    pub selection_order: Vec<usize>,
    pub initial_residual_norm: f64,
}

impl OmpTrace {
    pub fn final_residual_norm(&self) -> f64 {
        self.iterations
            .last()
            .map_or(self.initial_residual_norm, |it| it.residual_norm)
    }
}

/// Runs at most `iterations` OMP steps on `y ≈ A x`, exiting early once the
/// residual vanishes relative to `‖y‖₂`.
pub fn omp_run(a: &DenseMatrix, y: &[f64], iterations: usize, policy: &TieBreakPolicy) -> Result<OmpTrace> {
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "measurement of length {} for {} rows",
            y.len(),
            a.rows()
        )));
    }
    if iterations == 0 || iterations > a.cols() {
        return Err(Error::InvalidArgument(format!(
            "iteration count {iterations} must be in 1..={}",
            a.cols()
        )));
    }
    if iterations > a.rows() {
        return Err(Error::InvalidArgument(format!(
            "iteration count {iterations} exceeds the {} rows available for the least-squares refit",
            a.rows()
        )));
    }

    let y_norm = norm2(y);
    let stop = EARLY_EXIT_TOLERANCE * y_norm;
    let mut selected = Support::empty();
    let mut order = Vec::with_capacity(iterations);
    let mut coefficients: Vec<f64> = Vec::new();
    let mut residual = y.to_vec();
    let mut residual_norm = y_norm;
    let mut trace = Vec::with_capacity(iterations);

    for iteration in 1..=iterations {
        if residual_norm <= stop {
            break;
        }
        let profile = correlations(a, &residual, &Support::empty())?;
        let pick = select_index(&profile.values, &selected, policy)?;
        selected.insert(pick.index);
        order.push(pick.index);

        let sub = a.select_columns(selected.indices())?;
        let fit = least_squares(&sub, y)?;
        let approx = sub.mul_vec(&fit.solution)?;
        residual = y.iter().zip(&approx).map(|(y, p)| y - p).collect();
        residual_norm = norm2(&residual);
        coefficients = fit.solution;

        trace.push(OmpIteration {
            iteration,
            selected_index: pick.index,
            max_correlation: profile.values[pick.index].abs(),
            correlation_values: profile.values,
            tie_detected: pick.tie_detected,
            residual_norm,
            rank_deficient: fit.rank_deficient,
        });
    }

    let mut estimate = vec![0.0; a.cols()];
    for (&i, &c) in selected.indices().iter().zip(&coefficients) {
        estimate[i] = c;
    }
    Ok(OmpTrace {
        iterations: trace,
        final_estimate: estimate,
        final_support: selected,
        selection_order: order,
        initial_residual_norm: y_norm,
    })
}

/// Whether OMP run for `‖x‖₀` iterations on `y = A x` returns exactly the
/// support of `x` with coefficients within [`RECOVERY_TOLERANCE`].
pub fn recovers(a: &DenseMatrix, x: &SparseSignal, policy: &TieBreakPolicy) -> Result<bool> {
    Ok(recovery_trace(a, x, policy)?.1)
}

/// Like [`recovers`] but also hands back the trace.
pub fn recovery_trace(a: &DenseMatrix, x: &SparseSignal, policy: &TieBreakPolicy) -> Result<(OmpTrace, bool)> {
    if x.sparsity() == 0 {
        return Err(Error::InvalidArgument("signal must have at least one nonzero".into()));
    }
    let y = a.mul_vec(x.entries())?;
    let trace = omp_run(a, &y, x.sparsity(), policy)?;
    let err: f64 = trace
        .final_estimate
        .iter()
        .zip(x.entries())
        .map(|(e, v)| (e - v) * (e - v))
        .sum::<f64>()
        .sqrt();
    let ok = &trace.final_support == x.support() && err <= RECOVERY_TOLERANCE * x.l2_norm();
    Ok((trace, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thm2(k: usize) -> DenseMatrix {
        let n = k + 1;
        let mut rows = vec![vec![0.0; n]; n];
        for (i, row) in rows.iter_mut().enumerate().take(k) {
            row[i] = 1.0;
            row[k] = 1.0 / k as f64;
        }
        rows[k][k] = ((k as f64 - 1.0) / k as f64).sqrt();
        DenseMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn tie_resolution() {
        let none = Support::empty();
        let all_equal = [1.0, 1.0, 1.0];
        let s = select_index(&all_equal, &none, &TieBreakPolicy::HighestIndex).unwrap();
        assert_eq!(s, Selection { index: 2, tie_detected: true });
        let s = select_index(&all_equal, &none, &TieBreakPolicy::LowestIndex).unwrap();
        assert_eq!(s, Selection { index: 0, tie_detected: true });
        let adv = TieBreakPolicy::AdversarialOffSupport {
            support: Support::leading(2),
        };
        assert_eq!(select_index(&all_equal, &none, &adv).unwrap().index, 2);
        // no off-support candidate left: fall back to the lowest tied index
        let adv_all = TieBreakPolicy::AdversarialOffSupport {
            support: Support::leading(3),
        };
        assert_eq!(select_index(&all_equal, &none, &adv_all).unwrap().index, 0);
    }

    #[test]
    fn unique_maximum_ignores_policy() {
        for policy in [
            TieBreakPolicy::LowestIndex,
            TieBreakPolicy::HighestIndex,
            TieBreakPolicy::AdversarialOffSupport {
                support: Support::leading(1),
            },
        ] {
            let s = select_index(&[0.5, 0.9, 0.1], &Support::empty(), &policy).unwrap();
            assert_eq!(s, Selection { index: 1, tie_detected: false });
        }
        // negative correlations compete by magnitude
        let s = select_index(&[0.5, -0.9, 0.1], &Support::empty(), &TieBreakPolicy::LowestIndex).unwrap();
        assert_eq!(s.index, 1);
    }

    #[test]
    fn excluded_indices_are_skipped() {
        let excl = Support::new(vec![1], 3).unwrap();
        let s = select_index(&[0.5, 0.9, 0.1], &excl, &TieBreakPolicy::LowestIndex).unwrap();
        assert_eq!(s.index, 0);
        let all = Support::leading(3);
        assert!(select_index(&[0.5, 0.9, 0.1], &all, &TieBreakPolicy::LowestIndex).is_err());
    }

    #[test]
    fn one_step_on_identity() {
        let t = omp_run(&DenseMatrix::identity(3), &[0.0, 5.0, 0.0], 1, &TieBreakPolicy::LowestIndex).unwrap();
        assert_eq!(t.iterations.len(), 1);
        assert_eq!(t.iterations[0].selected_index, 1);
        assert_eq!(t.final_estimate, vec![0.0, 5.0, 0.0]);
        assert_eq!(t.final_residual_norm(), 0.0);
    }

    #[test]
    fn early_exit_on_zero_residual() {
        let t = omp_run(&DenseMatrix::identity(3), &[0.0, 1.0, 0.0], 3, &TieBreakPolicy::LowestIndex).unwrap();
        assert_eq!(t.iterations.len(), 1);
        let t = omp_run(&DenseMatrix::identity(3), &[0.0; 3], 2, &TieBreakPolicy::LowestIndex).unwrap();
        assert!(t.iterations.is_empty());
        assert_eq!(t.final_estimate, vec![0.0; 3]);
    }

    #[test]
    fn counterexample_first_pick_is_off_support() {
        let a = thm2(2);
        let y = a.mul_vec(&[1.0, 1.0, 0.0]).unwrap();
        let t = omp_run(&a, &y, 2, &TieBreakPolicy::HighestIndex).unwrap();
        assert_eq!(t.iterations[0].selected_index, 2);
        assert!(t.iterations[0].tie_detected);
        assert_ne!(t.final_support, Support::leading(2));
    }

    #[test]
    fn recovery_predicate() {
        let x = SparseSignal::new(vec![0.0, 2.0, 0.0, -1.0]).unwrap();
        for policy in [TieBreakPolicy::LowestIndex, TieBreakPolicy::HighestIndex] {
            assert!(recovers(&DenseMatrix::identity(4), &x, &policy).unwrap());
        }
        let x = SparseSignal::new(vec![1.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(!recovers(&thm2(3), &x, &TieBreakPolicy::HighestIndex).unwrap());
        let zero = SparseSignal::new(vec![0.0; 4]).unwrap();
        assert!(recovers(&thm2(3), &zero, &TieBreakPolicy::LowestIndex).is_err());
    }

    #[test]
    fn rank_deficient_refit_does_not_panic() {
        // y lies outside the range, so every correlation is zero and the
        // second pick duplicates the first column
        let a = DenseMatrix::from_rows(&[[1.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]).unwrap();
        let t = omp_run(&a, &[0.0, 0.0, 1.0], 2, &TieBreakPolicy::LowestIndex).unwrap();
        assert_eq!(t.selection_order, vec![0, 1]);
        assert!(t.iterations[1].rank_deficient);
        assert_eq!(t.final_residual_norm(), 1.0);
    }

    #[test]
    fn argument_errors() {
        let a = DenseMatrix::identity(3);
        assert!(omp_run(&a, &[1.0; 2], 1, &TieBreakPolicy::LowestIndex).is_err());
        assert!(omp_run(&a, &[1.0; 3], 0, &TieBreakPolicy::LowestIndex).is_err());
        assert!(omp_run(&a, &[1.0; 3], 4, &TieBreakPolicy::LowestIndex).is_err());
    }
}
