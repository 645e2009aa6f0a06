//! The `(K+1)×(K+1)` matrix with `δ_{K+1} = 1/√K` on which OMP can pick a
//! wrong column first.
//!
//! The first `K` columns are `e_1, …, e_K`; the last column has `1/K` in the
//! first `K` coordinates and `√((K−1)/K)` in the last one, so it has unit
//! norm. `AᵀA` has eigenvalues `1` (multiplicity `K−1`) and `1 ± 1/√K`, and
//! with `x = (1, …, 1, 0)` every column correlates with `A x` equally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{correlations, SparseSignal, Support};
use crate::numerics::{gram, sym_eigenvalues, DenseMatrix};
use crate::omp::{recovery_trace, TieBreakPolicy};
use crate::rip::{ric_exact, theorem1_condition};

/// Tolerance for comparing measured constants and eigenvalues with their
/// closed forms.
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;

pub fn build_matrix(k: usize) -> Result<DenseMatrix> {
    check_k(k)?;
    let n = k + 1;
    let mut data = vec![0.0; n * n];
    for i in 0..k {
        data[i * n + i] = 1.0;
        data[i * n + k] = 1.0 / k as f64;
    }
    data[k * n + k] = ((k as f64 - 1.0) / k as f64).sqrt();
    DenseMatrix::new(n, n, data)
}

/// `(1, …, 1, 0)` of length `K+1`.
pub fn build_signal(k: usize) -> Result<SparseSignal> {
    check_k(k)?;
    let mut entries = vec![1.0; k + 1];
    entries[k] = 0.0;
    SparseSignal::new(entries)
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("K must be at least 2, got {k}")));
    }
    Ok(())
}

/// `{1 − 1/√K, 1, …, 1, 1 + 1/√K}` sorted, length `K+1`.
pub fn analytic_spectrum(k: usize) -> Vec<f64> {
    let r = 1.0 / (k as f64).sqrt();
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0 - r);
    out.extend(std::iter::repeat_n(1.0, k - 1));
    out.push(1.0 + r);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyOutcome {
    pub policy: TieBreakPolicy,
    pub recovered: bool,
    pub first_pick: usize,
    pub final_support: Support,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub k: usize,
    pub delta_measured: f64,
    pub delta_analytic: f64,
    pub witness_support: Support,
    pub spectrum: Vec<f64>,
    pub spectrum_analytic: Vec<f64>,
    /// eigenvalues within [`SPECTRUM_TOLERANCE`] of 1
    pub unit_eigenvalue_count: usize,
    pub correlations_at_y: Vec<f64>,
    pub omp_first_pick_tie: bool,
    pub outcomes: Vec<PolicyOutcome>,
    pub omp_failed_under: Vec<TieBreakPolicy>,
    pub theorem1_condition: bool,
}

impl CounterexampleReport {
    pub fn delta_error(&self) -> f64 {
        (self.delta_measured - self.delta_analytic).abs()
    }

    pub fn spectrum_error(&self) -> f64 {
        self.spectrum
            .iter()
            .zip(&self.spectrum_analytic)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|S_i − 1|` over all columns.
    pub fn correlation_error(&self) -> f64 {
        self.correlations_at_y
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn failed_under(&self, name: &str) -> bool {
        self.omp_failed_under.iter().any(|p| p.name() == name)
    }
}

pub fn verify(k: usize) -> Result<CounterexampleReport> {
    let a = build_matrix(k)?;
    let x = build_signal(k)?;

    let ric = ric_exact(&a, k + 1)?;
    let spectrum = sym_eigenvalues(&gram(&a))?;
    let unit_eigenvalue_count = spectrum
        .iter()
        .filter(|v| (*v - 1.0).abs() <= SPECTRUM_TOLERANCE)
        .count();

    let y = a.mul_vec(x.entries())?;
    let profile = correlations(&a, &y, x.support())?;

    let policies = [
        TieBreakPolicy::LowestIndex,
        TieBreakPolicy::HighestIndex,
        TieBreakPolicy::AdversarialOffSupport {
            support: x.support().clone(),
        },
    ];
    let mut outcomes = Vec::with_capacity(policies.len());
    let mut first_pick_tie = false;
    for policy in policies {
        let (trace, recovered) = recovery_trace(&a, &x, &policy)?;
        first_pick_tie |= trace.iterations[0].tie_detected;
        outcomes.push(PolicyOutcome {
            first_pick: trace.selection_order[0],
            final_support: trace.final_support,
            recovered,
            policy,
        });
    }
    let omp_failed_under = outcomes
        .iter()
        .filter(|o| !o.recovered)
        .map(|o| o.policy.clone())
        .collect();

    Ok(CounterexampleReport {
        k,
        delta_measured: ric.delta,
        delta_analytic: 1.0 / (k as f64).sqrt(),
        witness_support: ric.witness_support,
        spectrum,
        spectrum_analytic: analytic_spectrum(k),
        unit_eigenvalue_count,
        correlations_at_y: profile.values,
        omp_first_pick_tie: first_pick_tie,
        outcomes,
        omp_failed_under,
        theorem1_condition: theorem1_condition(ric.delta, k),
    })
}
