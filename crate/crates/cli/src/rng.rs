//! Portable random source for experiments.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`. Derived draws are computed here rather than
//! through distribution crates so the exact arithmetic is documented:
//!
//! * uniform in `[0, 1)`: `(next_u64() >> 11) · 2⁻⁵³`
//! * standard normal: Box–Muller cosine branch,
//!   `√(−2 ln(1 − u₁)) · cos(2π u₂)` with two fresh uniforms per draw
//! * integer below `n`: rejection sampling on `next_u64()` against the largest
//!   multiple of `n`
//! * random `k`-subset of `0..n`: partial Fisher–Yates on `[0, 1, …, n−1]`,
//!   then sorted

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct ExperimentRng(ChaCha8Rng);

impl ExperimentRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.0.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut out = pool[..k].to_vec();
        out.sort_unstable();
        out
    }
}
