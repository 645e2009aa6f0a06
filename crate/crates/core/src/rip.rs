//! Exact restricted isometry constants by exhaustive support enumeration.
//!
//! `δ_K` is the largest deviation from 1 of any eigenvalue of any `K×K`
//! principal submatrix of `AᵀA`. Every `K`-subset of columns is visited, so
//! the cost is `binomial(n, K)` small eigenproblems; [`DEFAULT_BUDGET`] caps
//! it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{correlations, SparseSignal, Support};
use crate::numerics::{gram, sym_eigenvalues, DenseMatrix};

pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Slack allowed when checking the two correlation bounds of the lemma.
pub const LEMMA_SLACK: f64 = 1e-12;

/// Subsets handled by one parallel work item.
const CHUNK: u64 = 2048;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RicReport {
    pub order: usize,
    pub delta: f64,
    /// lexicographically first subset attaining `delta`
    pub witness_support: Support,
    /// smallest eigenvalue over every examined subset
    pub lambda_min: f64,
    /// largest eigenvalue over every examined subset
    pub lambda_max: f64,
    pub subsets_examined: u64,
}

/// `binomial(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
fn unrank(mut rank: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            let count = binomial(n - next - 1, remaining) as u64;
            if rank < count {
                break;
            }
            rank -= count;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Advances `subset` to its lexicographic successor. Returns false at the end.
fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
        return false;
    };
    subset[i] += 1;
    for j in (i + 1)..k {
        subset[j] = subset[j - 1] + 1;
    }
    true
}

#[derive(Debug, Clone)]
struct Partial {
    delta: f64,
    rank: u64,
    witness: Vec<usize>,
    lambda_min: f64,
    lambda_max: f64,
}

impl Partial {
    fn merge(self, other: Self) -> Self {
        let lambda_min = self.lambda_min.min(other.lambda_min);
        let lambda_max = self.lambda_max.max(other.lambda_max);
        let keep_self = self.delta > other.delta || (self.delta == other.delta && self.rank < other.rank);
        let best = if keep_self { self } else { other };
        Self {
            lambda_min,
            lambda_max,
            ..best
        }
    }
}

pub fn ric_exact(a: &DenseMatrix, order: usize) -> Result<RicReport> {
    ric_exact_with_budget(a, order, DEFAULT_BUDGET)
}

pub fn ric_exact_with_budget(a: &DenseMatrix, order: usize, budget: u64) -> Result<RicReport> {
    let n = a.cols();
    if order == 0 || order > n {
        return Err(Error::InvalidArgument(format!(
            "RIC order {order} must be in 1..={n}"
        )));
    }
    let subsets = binomial(n, order);
    if subsets > budget as u128 {
        return Err(Error::BudgetExceeded { subsets, budget });
    }
    let total = subsets as u64;
    let g = gram(a);

    let chunks: Vec<u64> = (0..total.div_ceil(CHUNK)).collect();
    let best = chunks
        .par_iter()
        .map(|&c| -> Result<Partial> {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut subset = unrank(start, n, order);
            let mut acc: Option<Partial> = None;
            for rank in start..end {
                let eig = sym_eigenvalues(&g.principal_submatrix(&subset))?;
                let lo = eig[0];
                let hi = eig[eig.len() - 1];
                let here = Partial {
                    delta: (hi - 1.0).max(1.0 - lo),
                    rank,
                    witness: subset.clone(),
                    lambda_min: lo,
                    lambda_max: hi,
                };
                acc = Some(match acc {
                    Some(prev) => prev.merge(here),
                    None => here,
                });
                next_subset(&mut subset, n);
            }
            Ok(acc.expect("chunks are nonempty"))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .reduce(Partial::merge)
        .expect("at least one subset");

    Ok(RicReport {
        order,
        delta: best.delta,
        witness_support: Support::new(best.witness, n)?,
        lambda_min: best.lambda_min,
        lambda_max: best.lambda_max,
        subsets_examined: total,
    })
}

/// Sufficient condition `δ_{K+1} < 1/(√K + 1)` for K-step recovery. The
/// inequality is strict.
pub fn theorem1_condition(delta: f64, k: usize) -> bool {
    delta < recovery_threshold(k)
}

/// `1/(√K + 1)`
pub fn recovery_threshold(k: usize) -> f64 {
    1.0 / ((k as f64).sqrt() + 1.0)
}

/// Correlation bounds for a K-sparse signal given `δ_{K+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub sparsity: usize,
    pub delta: f64,
    /// `max_{i ∈ supp x} |⟨A e_i, A x⟩|`
    pub s0: f64,
    pub max_off_support: f64,
    /// `(1 − δ)‖x‖₂ / √K`, a lower bound on `s0`
    pub eq2_lower_bound: f64,
    /// `δ‖x‖₂`, an upper bound on every off-support correlation
    pub eq1_upper_bound: f64,
    pub eq1_holds: bool,
    pub eq2_holds: bool,
    pub condition_holds: bool,
    /// `s0` strictly exceeds every off-support correlation
    pub conclusion_holds: bool,
}

/// Checks the correlation bounds on `y = A x`. `delta` must be the RIC of `A`
/// at order `‖x‖₀ + 1`; it is taken as given.
pub fn check_lemma1(a: &DenseMatrix, x: &SparseSignal, delta: f64) -> Result<Lemma1Report> {
    let k = x.sparsity();
    if k == 0 {
        return Err(Error::InvalidArgument("signal must have at least one nonzero".into()));
    }
    if x.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "signal of length {} for {} columns",
            x.len(),
            a.cols()
        )));
    }
    let y = a.mul_vec(x.entries())?;
    let profile = correlations(a, &y, x.support())?;
    let norm = x.l2_norm();
    let max_off_support = profile.max_off_support(x.support());
    let eq2_lower_bound = (1.0 - delta) * norm / (k as f64).sqrt();
    let eq1_upper_bound = delta * norm;
    Ok(Lemma1Report {
        sparsity: k,
        delta,
        s0: profile.s0,
        max_off_support,
        eq2_lower_bound,
        eq1_upper_bound,
        eq1_holds: max_off_support <= eq1_upper_bound + LEMMA_SLACK,
        eq2_holds: profile.s0 >= eq2_lower_bound - LEMMA_SLACK,
        condition_holds: theorem1_condition(delta, k),
        conclusion_holds: profile.s0 > max_off_support,
    })
}
