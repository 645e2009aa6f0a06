//! Seeded random-ensemble experiments that check K-step recovery on every
//! matrix meeting the sufficient RIC condition.

use std::fmt;
use std::str::FromStr;

use omprip::omp::recovery_trace;
use omprip::rip::{binomial, check_lemma1, recovery_threshold, ric_exact_with_budget, theorem1_condition};
use omprip::{DenseMatrix, Error, Result, SparseSignal, Support, TieBreakPolicy};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::ExperimentRng;

/// Test signals generated for every condition-holds instance.
pub const SIGNALS_PER_INSTANCE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// i.i.d. standard normal entries, each column scaled to unit norm
    GaussianUnitColumns,
    /// i.i.d. standard normal entries
    GaussianRaw,
}

impl FromStr for Ensemble {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gaussian-unit" | "gaussian_unit_columns" => Ok(Self::GaussianUnitColumns),
            "gaussian-raw" | "gaussian_raw" => Ok(Self::GaussianRaw),
            other => Err(format!("unknown ensemble `{other}` (expected gaussian-unit or gaussian-raw)")),
        }
    }
}

impl Ensemble {
    /// Entries are drawn row by row.
    pub fn sample(self, rng: &mut ExperimentRng, m: usize, n: usize) -> DenseMatrix {
        let mut data: Vec<f64> = (0..m * n).map(|_| rng.gaussian()).collect();
        if self == Self::GaussianUnitColumns {
            for j in 0..n {
                let norm = (0..m).map(|i| data[i * n + j].powi(2)).sum::<f64>().sqrt();
                if norm > 0.0 {
                    for i in 0..m {
                        data[i * n + j] /= norm;
                    }
                }
            }
        }
        DenseMatrix::new(m, n, data).expect("gaussian draws are finite")
    }
}

/// Tie-break policy as named on the command line. The adversarial variant
/// is bound to the support of each test signal when it runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyChoice {
    Lowest,
    Highest,
    Adversarial,
}

impl PolicyChoice {
    pub const ALL: [PolicyChoice; 3] = [Self::Lowest, Self::Highest, Self::Adversarial];

    pub fn bind(self, support: &Support) -> TieBreakPolicy {
        match self {
            Self::Lowest => TieBreakPolicy::LowestIndex,
            Self::Highest => TieBreakPolicy::HighestIndex,
            Self::Adversarial => TieBreakPolicy::AdversarialOffSupport {
                support: support.clone(),
            },
        }
    }
}

impl FromStr for PolicyChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lowest" => Ok(Self::Lowest),
            "highest" => Ok(Self::Highest),
            "adversarial" => Ok(Self::Adversarial),
            other => Err(format!("unknown policy `{other}` (expected lowest, highest or adversarial)")),
        }
    }
}

impl fmt::Display for PolicyChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Lowest => "lowest",
            Self::Highest => "highest",
            Self::Adversarial => "adversarial",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub m: usize,
    pub n: usize,
    pub sparsity: usize,
    pub ensemble: Ensemble,
    /// `None` runs every policy.
    pub tie_policy: Option<PolicyChoice>,
    pub budget: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let k = self.sparsity;
        if self.trials == 0 || self.m == 0 || self.n == 0 {
            return Err(Error::InvalidArgument("trials, m and n must be positive".into()));
        }
        if k == 0 || k + 1 > self.n {
            return Err(Error::InvalidArgument(format!(
                "sparsity {k} needs 1 <= K and K + 1 <= n = {}",
                self.n
            )));
        }
        if k > self.m {
            return Err(Error::InvalidArgument(format!("sparsity {k} exceeds m = {}", self.m)));
        }
        let subsets = binomial(self.n, k + 1);
        if subsets > self.budget as u128 {
            return Err(Error::BudgetExceeded {
                subsets,
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn policies(&self) -> Vec<PolicyChoice> {
        match self.tie_policy {
            Some(p) => vec![p],
            None => PolicyChoice::ALL.to_vec(),
        }
    }
}

/// Sign/magnitude patterns cycled through by [`test_signals`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalPattern {
    AllOnes,
    Gaussian,
    AlternatingSigns,
    MixedMagnitudes,
}

impl SignalPattern {
    const CYCLE: [SignalPattern; 4] = [
        Self::AllOnes,
        Self::Gaussian,
        Self::AlternatingSigns,
        Self::MixedMagnitudes,
    ];

    fn values(self, rng: &mut ExperimentRng, k: usize) -> Vec<f64> {
        let sign = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self {
            Self::AllOnes => vec![1.0; k],
            Self::Gaussian => (0..k)
                .map(|_| {
                    let v = rng.gaussian();
                    // keep every coefficient visibly nonzero
                    if v.abs() < 1e-3 { 1e-3f64.copysign(v) } else { v }
                })
                .collect(),
            Self::AlternatingSigns => (0..k).map(sign).collect(),
            Self::MixedMagnitudes => (0..k)
                .map(|i| sign(i) * 10f64.powf(2.0 * rng.uniform() - 1.0))
                .collect(),
        }
    }
}

/// `count` exactly-`k`-sparse signals on random supports, cycling through the
/// patterns all-ones, Gaussian, alternating signs and mixed magnitudes.
pub fn test_signals(rng: &mut ExperimentRng, n: usize, k: usize, count: usize) -> Vec<SparseSignal> {
    (0..count)
        .map(|i| {
            let pattern = SignalPattern::CYCLE[i % SignalPattern::CYCLE.len()];
            let support = Support::new(rng.subset(n, k), n).expect("subset within range");
            let values = pattern.values(rng, k);
            SparseSignal::from_support(n, &support, &values).expect("support matches values")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub trial: usize,
    pub delta: f64,
    pub condition_holds: bool,
    pub signals_tested: usize,
    pub recovery_runs: usize,
    pub recovery_failures: usize,
    /// selections outside the true support, summed over all runs
    pub off_support_selections: usize,
    pub lemma1_failures: usize,
    pub eq1_violations: usize,
    pub eq2_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Summary {
    pub threshold: f64,
    pub trials: usize,
    pub condition_holds: usize,
    pub condition_fraction: f64,
    pub signals_tested: usize,
    pub recovery_runs: usize,
    pub recovery_failures: usize,
    /// `None` when no instance met the condition
    pub success_rate: Option<f64>,
    pub off_support_selections: usize,
    pub lemma1_failures: usize,
    pub lemma1_rate: Option<f64>,
    pub eq1_violations: usize,
    pub eq2_violations: usize,
    pub min_delta: f64,
    pub max_delta: f64,
    pub instances: Vec<InstanceOutcome>,
}

pub fn run_theorem1(config: &ExperimentConfig) -> Result<Theorem1Summary> {
    let ensemble = config.ensemble;
    let (m, n) = (config.m, config.n);
    run_theorem1_with(config, |rng| ensemble.sample(rng, m, n))
}

/// Runs the experiment with a custom matrix source. Each trial gets its own
/// generator, seeded from a master stream, so results do not depend on the
/// evaluation order.
pub fn run_theorem1_with<G>(config: &ExperimentConfig, generate: G) -> Result<Theorem1Summary>
where
    G: Fn(&mut ExperimentRng) -> DenseMatrix + Sync,
{
    config.validate()?;
    let mut master = ExperimentRng::new(config.seed);
    let seeds: Vec<u64> = (0..config.trials).map(|_| master.next_u64()).collect();
    let policies = config.policies();

    let instances = seeds
        .par_iter()
        .enumerate()
        .map(|(trial, &seed)| {
            let mut rng = ExperimentRng::new(seed);
            let a = generate(&mut rng);
            evaluate_instance(trial, &a, config, &policies, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;

    let holds: Vec<&InstanceOutcome> = instances.iter().filter(|i| i.condition_holds).collect();
    let sum = |f: fn(&InstanceOutcome) -> usize| holds.iter().map(|i| f(i)).sum::<usize>();
    let recovery_runs = sum(|i| i.recovery_runs);
    let recovery_failures = sum(|i| i.recovery_failures);
    let signals_tested = sum(|i| i.signals_tested);
    let lemma1_failures = sum(|i| i.lemma1_failures);
    let rate = |fail: usize, total: usize| (total > 0).then(|| (total - fail) as f64 / total as f64);

    Ok(Theorem1Summary {
        threshold: recovery_threshold(config.sparsity),
        trials: config.trials,
        condition_holds: holds.len(),
        condition_fraction: holds.len() as f64 / config.trials as f64,
        signals_tested,
        recovery_runs,
        recovery_failures,
        success_rate: rate(recovery_failures, recovery_runs),
        off_support_selections: sum(|i| i.off_support_selections),
        lemma1_failures,
        lemma1_rate: rate(lemma1_failures, signals_tested),
        eq1_violations: sum(|i| i.eq1_violations),
        eq2_violations: sum(|i| i.eq2_violations),
        min_delta: instances.iter().map(|i| i.delta).fold(f64::INFINITY, f64::min),
        max_delta: instances.iter().map(|i| i.delta).fold(f64::NEG_INFINITY, f64::max),
        instances,
    })
}

fn evaluate_instance(
    trial: usize,
    a: &DenseMatrix,
    config: &ExperimentConfig,
    policies: &[PolicyChoice],
    rng: &mut ExperimentRng,
) -> Result<InstanceOutcome> {
    let k = config.sparsity;
    let delta = ric_exact_with_budget(a, k + 1, config.budget)?.delta;
    let mut out = InstanceOutcome {
        trial,
        delta,
        condition_holds: theorem1_condition(delta, k),
        signals_tested: 0,
        recovery_runs: 0,
        recovery_failures: 0,
        off_support_selections: 0,
        lemma1_failures: 0,
        eq1_violations: 0,
        eq2_violations: 0,
    };
    if !out.condition_holds {
        return Ok(out);
    }
    for x in test_signals(rng, a.cols(), k, SIGNALS_PER_INSTANCE) {
        out.signals_tested += 1;
        let lemma = check_lemma1(a, &x, delta)?;
        out.lemma1_failures += usize::from(!lemma.conclusion_holds);
        out.eq1_violations += usize::from(!lemma.eq1_holds);
        out.eq2_violations += usize::from(!lemma.eq2_holds);
        for &p in policies {
            let (trace, ok) = recovery_trace(a, &x, &p.bind(x.support()))?;
            out.recovery_runs += 1;
            out.recovery_failures += usize::from(!ok);
            out.off_support_selections += trace
                .selection_order
                .iter()
                .filter(|i| !x.support().contains(**i))
                .count();
        }
    }
    Ok(out)
}
