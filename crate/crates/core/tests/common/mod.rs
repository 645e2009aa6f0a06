#![allow(dead_code)]

use omprip::{DenseMatrix, SparseSignal, Support};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn gaussian_matrix(rng: &mut impl Rng, m: usize, n: usize) -> DenseMatrix {
    let data = (0..m * n).map(|_| gaussian(rng)).collect();
    DenseMatrix::new(m, n, data).unwrap()
}

pub fn normalize_columns(a: &DenseMatrix) -> DenseMatrix {
    let cols: Vec<Vec<f64>> = (0..a.cols())
        .map(|j| {
            let c = a.column(j);
            let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            c.into_iter().map(|v| v / n).collect()
        })
        .collect();
    DenseMatrix::from_columns(&cols).unwrap()
}

pub fn unit_gaussian_matrix(rng: &mut impl Rng, m: usize, n: usize) -> DenseMatrix {
    normalize_columns(&gaussian_matrix(rng, m, n))
}

/// `I + σ G` with unit-norm columns; small `σ` keeps every RIC small.
pub fn perturbed_identity(rng: &mut impl Rng, n: usize, sigma: f64) -> DenseMatrix {
    let g = gaussian_matrix(rng, n, n);
    let data = (0..n * n)
        .map(|p| if p / n == p % n { 1.0 } else { 0.0 } + sigma * g.as_slice()[p])
        .collect();
    normalize_columns(&DenseMatrix::new(n, n, data).unwrap())
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let g = gaussian_matrix(rng, n, n);
    let data = (0..n * n)
        .map(|p| {
            let (i, j) = (p / n, p % n);
            g.get(i.min(j), i.max(j))
        })
        .collect();
    DenseMatrix::new(n, n, data).unwrap()
}

pub fn random_support(rng: &mut impl Rng, n: usize, k: usize) -> Support {
    Support::new(sample(rng, n, k).into_vec(), n).unwrap()
}

/// K-sparse signal with Gaussian coefficients bounded away from zero.
pub fn random_sparse(rng: &mut impl Rng, n: usize, k: usize) -> SparseSignal {
    let support = random_support(rng, n, k);
    let values: Vec<f64> = (0..k)
        .map(|_| {
            let v = gaussian(rng);
            v + 0.1f64.copysign(v)
        })
        .collect();
    SparseSignal::from_support(n, &support, &values).unwrap()
}

pub fn naive_dot_columns(a: &DenseMatrix, i: usize, j: usize) -> f64 {
    let mut s = 0.0;
    for r in 0..a.rows() {
        s += a.get(r, i) * a.get(r, j);
    }
    s
}
