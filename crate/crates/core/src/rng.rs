//! Seeded random streams and small sampling helpers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type RngState = ChaCha8Rng;

/// Stream for replica `index` of a run seeded with `seed`: `seed XOR index`.
pub fn stream(seed: u64, index: u64) -> RngState {
    ChaCha8Rng::seed_from_u64(seed ^ index)
}

/// Mixes a label into a seed so that independent experiments sharing a base
/// seed draw from unrelated streams.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(label.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    rng.random()
}

/// Runs `f` once per replica on its own stream, in parallel, returning the
/// results in replica order.
pub fn replicas<T, F>(seed: u64, reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngState) -> T + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|i| f(&mut stream(seed, i)))
        .collect()
}

/// Index drawn with probability proportional to `weights`.
pub fn pick<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            if u < w {
                return i;
            }
            u -= w;
            last = i;
        }
    }
    last
}

/// Running mean and standard error of the mean.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanAcc {
    pub n: u64,
    sum: f64,
    sum_sq: f64,
}

impl MeanAcc {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn from_values(values: &[f64]) -> Self {
        let mut acc = Self::default();
        for &x in values {
            acc.push(x);
        }
        acc
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        self.sum / self.n as f64
    }

    /// Sample standard deviation divided by `√n`.
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}
