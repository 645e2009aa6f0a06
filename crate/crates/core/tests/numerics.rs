mod common;

use common::*;
use omprip::numerics::{dot, norm2};
use omprip::{gram, least_squares, sym_eigenvalues, DenseMatrix};
use proptest::prelude::*;

#[test]
fn gram_matches_naive_double_loop() {
    let mut r = rng(11);
    let a = gaussian_matrix(&mut r, 5, 4);
    let g = gram(&a);
    for i in 0..4 {
        for j in 0..4 {
            assert!((g.get(i, j) - naive_dot_columns(&a, i, j)).abs() < 1e-12);
            assert_eq!(g.get(i, j), g.get(j, i));
        }
    }
}

#[test]
fn eigenvalue_sum_equals_trace() {
    let mut r = rng(12);
    let g = random_symmetric(&mut r, 6);
    let eig = sym_eigenvalues(&g).unwrap();
    let sum: f64 = eig.iter().sum();
    assert!((sum - g.trace()).abs() <= 1e-10);
    assert!(eig.windows(2).all(|w| w[0] <= w[1]));
}

/// Closed-form roots of the characteristic polynomial of a symmetric 3×3
/// matrix (trigonometric method).
fn eig3_closed_form(g: &DenseMatrix) -> [f64; 3] {
    let p1 = g.get(0, 1).powi(2) + g.get(0, 2).powi(2) + g.get(1, 2).powi(2);
    let q = g.trace() / 3.0;
    let p2 = (0..3).map(|i| (g.get(i, i) - q).powi(2)).sum::<f64>() + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let b = |i: usize, j: usize| (g.get(i, j) - if i == j { q } else { 0.0 }) / p;
    let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [lo, 3.0 * q - hi - lo, hi]
}

#[test]
fn jacobi_matches_closed_form_3x3() {
    let mut r = rng(13);
    for _ in 0..100 {
        let g = random_symmetric(&mut r, 3);
        let eig = sym_eigenvalues(&g).unwrap();
        let oracle = eig3_closed_form(&g);
        let scale = g.frobenius_norm();
        for (a, b) in eig.iter().zip(oracle) {
            assert!((a - b).abs() <= 1e-10 * scale, "{eig:?} vs {oracle:?}");
        }
    }
}

#[test]
fn least_squares_normal_equations() {
    let mut r = rng(14);
    let a = gaussian_matrix(&mut r, 8, 3);
    let y: Vec<f64> = (0..8).map(|_| gaussian(&mut r)).collect();
    let z = least_squares(&a, &y).unwrap();
    assert!(!z.rank_deficient);
    let res: Vec<f64> = a.mul_vec(&z.solution).unwrap().iter().zip(&y).map(|(p, y)| p - y).collect();
    let normal = a.tr_mul_vec(&res).unwrap();
    assert!(norm2(&normal) <= 1e-9);
}

#[test]
fn eigensolver_handles_clustered_spectrum() {
    // diag(1, 1, 1) rotated plus a rank-one bump: eigenvalues {1, 1, 1 + 3}
    let v = [1.0 / 3f64.sqrt(); 3];
    let data = (0..9)
        .map(|p| if p / 3 == p % 3 { 1.0 } else { 0.0 } + 3.0 * v[p / 3] * v[p % 3])
        .collect();
    let g = DenseMatrix::new(3, 3, data).unwrap();
    let eig = sym_eigenvalues(&g).unwrap();
    for (a, b) in eig.iter().zip([1.0, 1.0, 4.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

fn symmetric_strategy() -> impl Strategy<Value = DenseMatrix> {
    (1usize..9).prop_flat_map(|n| {
        prop::collection::vec(-10.0f64..10.0, n * n).prop_map(move |v| {
            let data = (0..n * n)
                .map(|p| {
                    let (i, j) = (p / n, p % n);
                    v[i.min(j) * n + i.max(j)]
                })
                .collect();
            DenseMatrix::new(n, n, data).unwrap()
        })
    })
}

fn tall_strategy() -> impl Strategy<Value = (DenseMatrix, Vec<f64>)> {
    (1usize..6, 0usize..6).prop_flat_map(|(n, extra)| {
        let m = n + extra;
        (
            prop::collection::vec(-5.0f64..5.0, m * n),
            prop::collection::vec(-5.0f64..5.0, m),
        )
            .prop_map(move |(a, y)| (DenseMatrix::new(m, n, a).unwrap(), y))
    })
}

proptest! {
    #[test]
    fn trace_identity(g in symmetric_strategy()) {
        let eig = sym_eigenvalues(&g).unwrap();
        let sum: f64 = eig.iter().sum();
        let scale = g.frobenius_norm().max(1.0);
        prop_assert!((sum - g.trace()).abs() <= 1e-9 * scale);
    }

    #[test]
    fn spectral_radius_below_frobenius(g in symmetric_strategy()) {
        let eig = sym_eigenvalues(&g).unwrap();
        let radius = eig.iter().map(|v| v.abs()).fold(0.0, f64::max);
        prop_assert!(radius <= g.frobenius_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn normal_equation_residual((a, y) in tall_strategy()) {
        let ls = least_squares(&a, &y).unwrap();
        prop_assume!(!ls.rank_deficient);
        let res: Vec<f64> = a.mul_vec(&ls.solution).unwrap().iter().zip(&y).map(|(p, y)| p - y).collect();
        let normal = a.tr_mul_vec(&res).unwrap();
        prop_assert!(norm2(&normal) <= 1e-9 * a.frobenius_norm() * norm2(&y).max(f64::MIN_POSITIVE));
    }

    #[test]
    fn gram_entries_are_column_dots(v in prop::collection::vec(-1.0f64..1.0, 12)) {
        let a = DenseMatrix::new(4, 3, v).unwrap();
        let g = gram(&a);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((g.get(i, j) - dot(&a.column(i), &a.column(j))).abs() <= 1e-12);
            }
        }
    }
}
