mod common;

use common::*;
use omprip::numerics::{dot, norm2};
use omprip::omp::recovery_trace;
use omprip::rip::{check_lemma1, ric_exact, theorem1_condition};
use omprip::{correlations, omp_run, recovers, DenseMatrix, Support, TieBreakPolicy};
use proptest::prelude::*;

fn policies(support: &Support) -> [TieBreakPolicy; 3] {
    [
        TieBreakPolicy::LowestIndex,
        TieBreakPolicy::HighestIndex,
        TieBreakPolicy::AdversarialOffSupport {
            support: support.clone(),
        },
    ]
}

fn check_trace_invariants(a: &DenseMatrix, y: &[f64], k: usize, policy: &TieBreakPolicy) {
    let trace = omp_run(a, y, k, policy).unwrap();
    let scale = 1e-9 * a.frobenius_norm() * norm2(y);
    let mut prev = norm2(y);
    let mut chosen = Support::empty();
    for it in &trace.iterations {
        assert!(chosen.insert(it.selected_index), "index selected twice");
        assert!(it.residual_norm <= prev + 1e-12);
        prev = it.residual_norm;
    }
    assert!(trace.iterations.len() <= k);
    assert_eq!(trace.final_support, chosen);
    assert_eq!(trace.final_support.len(), trace.iterations.len());

    // residual after the last refit is orthogonal to every chosen column
    let fit = a.mul_vec(&trace.final_estimate).unwrap();
    let res: Vec<f64> = y.iter().zip(&fit).map(|(y, f)| y - f).collect();
    for &c in trace.final_support.indices() {
        assert!(dot(&a.column(c), &res).abs() <= scale.max(1e-15));
    }
    for (i, v) in trace.final_estimate.iter().enumerate() {
        if !trace.final_support.contains(i) {
            assert_eq!(*v, 0.0);
        }
    }
}

#[test]
fn invariants_on_random_instances() {
    let mut r = rng(31);
    for _ in 0..60 {
        let a = unit_gaussian_matrix(&mut r, 10, 15);
        let y: Vec<f64> = (0..10).map(|_| gaussian(&mut r)).collect();
        for k in [1, 4, 8] {
            for p in policies(&Support::leading(3)) {
                check_trace_invariants(&a, &y, k, &p);
            }
        }
    }
}

#[test]
fn recovers_under_the_sufficient_condition() {
    // 15×15 near-orthogonal instances: random 10×15 Gaussian matrices never
    // reach δ_4 < 1/(√3 + 1)
    let mut r = rng(32);
    let mut instances = 0;
    while instances < 20 {
        let a = perturbed_identity(&mut r, 15, 0.04);
        let delta = ric_exact(&a, 4).unwrap().delta;
        if !theorem1_condition(delta, 3) {
            continue;
        }
        instances += 1;
        for _ in 0..5 {
            let x = random_sparse(&mut r, 15, 3);
            let y = a.mul_vec(x.entries()).unwrap();
            let trace = omp_run(&a, &y, 3, &TieBreakPolicy::LowestIndex).unwrap();
            assert_eq!(&trace.final_support, x.support());
            for (e, v) in trace.final_estimate.iter().zip(x.entries()) {
                assert!((e - v).abs() < 1e-8);
            }
            for p in policies(x.support()) {
                let (trace, ok) = recovery_trace(&a, &x, &p).unwrap();
                assert!(ok);
                assert!(trace.selection_order.iter().all(|i| x.support().contains(*i)));
            }
            let first = correlations(&a, &y, x.support()).unwrap();
            assert!(first.s0 > first.max_off_support(x.support()));
            assert!(check_lemma1(&a, &x, delta).unwrap().conclusion_holds);
        }
    }
}

#[test]
fn square_full_rank_exact_solve() {
    let mut r = rng(33);
    let a = gaussian_matrix(&mut r, 8, 8);
    let y: Vec<f64> = (0..8).map(|_| gaussian(&mut r)).collect();
    let trace = omp_run(&a, &y, 8, &TieBreakPolicy::LowestIndex).unwrap();
    assert!(trace.final_residual_norm() <= 1e-9 * norm2(&y));
}

#[test]
fn orthonormal_columns_always_recover() {
    let mut r = rng(34);
    let a = DenseMatrix::identity(6);
    for _ in 0..50 {
        let x = random_sparse(&mut r, 6, 2);
        for p in policies(x.support()) {
            assert!(recovers(&a, &x, &p).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn correlations_are_linear(
        seed in any::<u64>(),
        v1 in prop::collection::vec(-3.0f64..3.0, 5),
        v2 in prop::collection::vec(-3.0f64..3.0, 5),
    ) {
        let a = gaussian_matrix(&mut rng(seed), 5, 7);
        let s = Support::new(vec![0, 2], 7).unwrap();
        let sum: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| a + b).collect();
        let p1 = correlations(&a, &v1, &s).unwrap();
        let p2 = correlations(&a, &v2, &s).unwrap();
        let p = correlations(&a, &sum, &s).unwrap();
        for i in 0..7 {
            prop_assert!((p.values[i] - p1.values[i] - p2.values[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn trace_invariants_hold(seed in any::<u64>(), k in 1usize..7) {
        let mut r = rng(seed);
        let a = unit_gaussian_matrix(&mut r, 6, 9);
        let y: Vec<f64> = (0..6).map(|_| gaussian(&mut r)).collect();
        check_trace_invariants(&a, &y, k, &TieBreakPolicy::HighestIndex);
    }
}
