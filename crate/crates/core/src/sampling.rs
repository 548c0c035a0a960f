//! Reproducible sample points over a coordinate box: a Halton sequence plus
//! seeded uniform draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub low_discrepancy: usize,
    pub random: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub const DEFAULT_SAMPLES: usize = 200;
    pub const DEFAULT_SEED: u64 = 42;

    /// `total` points, half from the Halton sequence and half uniform.
    pub fn split(total: usize, seed: u64) -> Self {
        let low_discrepancy = total / 2;
        SampleConfig {
            low_discrepancy,
            random: total - low_discrepancy,
            seed,
        }
    }

    pub fn total(&self) -> usize {
        self.low_discrepancy + self.random
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig::split(Self::DEFAULT_SAMPLES, Self::DEFAULT_SEED)
    }
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut f = 1.0 / base as f64;
    while index > 0 {
        result += f * (index % base) as f64;
        index /= base;
        f /= base as f64;
    }
    result
}

/// Deterministic generator for every random quantity in a run.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sample_points(domain: &[(f64, f64)], config: &SampleConfig) -> Vec<Vec<f64>> {
    assert!(
        domain.len() <= PRIMES.len(),
        "Halton bases cover up to 16 coordinates"
    );
    let mut points = Vec::with_capacity(config.total());
    for idx in 1..=config.low_discrepancy as u64 {
        points.push(
            domain
                .iter()
                .zip(PRIMES)
                .map(|(&(lo, hi), p)| lo + (hi - lo) * radical_inverse(idx, p as u64))
                .collect(),
        );
    }
    let mut rng = rng(config.seed);
    for _ in 0..config.random {
        points.push(
            domain
                .iter()
                .map(|&(lo, hi)| rng.gen_range(lo..=hi))
                .collect(),
        );
    }
    points
}

/// Uniform vector with entries in `[-1, 1]`.
pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_prefix() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(1, 3) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn points_stay_in_box_and_repeat() {
        let dom = [(-2.0, 2.0), (0.5, 1.0), (10.0, 11.0)];
        let cfg = SampleConfig::split(101, 7);
        let a = sample_points(&dom, &cfg);
        assert_eq!(a.len(), 101);
        for p in &a {
            for (x, &(lo, hi)) in p.iter().zip(&dom) {
                assert!(*x >= lo && *x <= hi);
            }
        }
        assert_eq!(a, sample_points(&dom, &cfg));
        assert_ne!(a, sample_points(&dom, &SampleConfig::split(101, 8)));
    }
}
