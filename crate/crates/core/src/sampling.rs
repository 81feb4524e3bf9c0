//! Exact sampling from rational distributions with a seeded ChaCha stream.

use alloc::vec::Vec;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

/// Seeded generator used by every simulation in the crate.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A distribution rescaled to integer weights over a common denominator, so
/// draws are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSampler {
    cumulative: Vec<u64>,
    total: u64,
}

impl ExactSampler {
    pub fn new(dist: &[Rational]) -> Result<Self> {
        if dist.is_empty() {
            return Err(Error::EmptyInput);
        }
        let sum: Rational = dist.iter().sum();
        if !sum.is_one() {
            return Err(Error::WeightsNotNormalized(sum));
        }
        let den = common_denominator(dist.iter());
        let total = den.to_u64().ok_or(Error::SamplingPrecision)?;
        let mut cumulative = Vec::with_capacity(dist.len());
        let mut acc = 0u64;
        for p in dist {
            if p.is_negative() {
                return Err(Error::OutOfRange(alloc::format!("negative probability {p}")));
            }
            let scaled = (p.numer() * (&den / p.denom()))
                .to_u64()
                .ok_or(Error::SamplingPrecision)?;
            acc += scaled;
            cumulative.push(acc);
        }
        Ok(ExactSampler { cumulative, total })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u = rng.random_range(0..self.total);
        self.cumulative.partition_point(|&c| c <= u)
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }
}

/// Empirical frequencies `counts / trials`.
pub fn frequencies(counts: &[u64], trials: u64) -> Vec<Rational> {
    counts
        .iter()
        .map(|&c| Rational::new(c as i64, trials.max(1) as i64))
        .collect()
}

/// Total-variation distance `½ Σ |p − q|`.
pub fn total_variation(p: &[Rational], q: &[Rational]) -> Rational {
    let s: Rational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    s * Rational::new(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn deterministic_distribution_always_hits() {
        let s = ExactSampler::new(&[rat(0, 1), rat(1, 1), rat(0, 1)]).unwrap();
        let mut r = rng(7, 0);
        for _ in 0..100 {
            assert_eq!(s.sample(&mut r), 1);
        }
    }

    #[test]
    fn frequencies_are_close_for_quarter() {
        let s = ExactSampler::new(&[rat(1, 4), rat(3, 4)]).unwrap();
        let mut r = rng(1, 0);
        let mut counts = [0u64; 2];
        for _ in 0..20_000 {
            counts[s.sample(&mut r)] += 1;
        }
        let f = counts[0] as f64 / 20_000.0;
        assert!((f - 0.25).abs() < 0.02, "{f}");
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(ExactSampler::new(&[]), Err(Error::EmptyInput));
        assert!(matches!(
            ExactSampler::new(&[rat(1, 2)]),
            Err(Error::WeightsNotNormalized(_))
        ));
    }

    #[test]
    fn tv_distance() {
        assert_eq!(
            total_variation(&[rat(1, 2), rat(1, 2)], &[rat(1, 4), rat(3, 4)]),
            rat(1, 4)
        );
    }
}
