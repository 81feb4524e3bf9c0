//! Certified trial counts for the multinomial Chernoff bound
//! `Pr(|f − μ| >= εμ) <= 2 exp(−ε² t / (3n))`.

use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Failure probability: an exact rational, or `2·e^(−k)` for rational `k`
/// so that `ln(2/δ) = k` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Delta {
    Exact(Rational),
    TwoOverExp(Rational),
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Exact(d) => write!(f, "{d}"),
            Delta::TwoOverExp(k) if k.is_one() => f.write_str("2/e"),
            Delta::TwoOverExp(k) => write!(f, "2/e^{k}"),
        }
    }
}

impl FromStr for Delta {
    type Err = Error;

    /// Accepts `p/q`, `2/e`, and `2/e^k` with rational `k`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "2/e" {
            return Ok(Delta::TwoOverExp(Rational::one()));
        }
        if let Some(k) = t.strip_prefix("2/e^") {
            let k = k
                .trim_matches(|c| c == '(' || c == ')')
                .parse::<Rational>()
                .map_err(|e| Error::OutOfRange(e.to_string()))?;
            return Ok(Delta::TwoOverExp(k));
        }
        t.parse::<Rational>()
            .map(Delta::Exact)
            .map_err(|e| Error::OutOfRange(e.to_string()))
    }
}

fn factorial_bound(x: &Rational, terms: u32) -> (Rational, Rational) {
    // lower = Σ_{k<=N} x^k/k!, upper adds x^{N+1}/(N+1)! · 3^{⌈x⌉} >= the tail.
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for k in 1..=terms {
        term = term * x / Rational::from(k);
        sum += &term;
    }
    let next = term * x / Rational::from(terms + 1);
    let ceil = x.ceil().to_u32().unwrap_or(u32::MAX).max(1);
    let tail = next * Rational::from(3i64).pow(ceil);
    let upper = &sum + tail;
    (sum, upper)
}

/// Decides `exp(x) >= level` exactly for rational `x >= 0`.
///
/// For `x > 0` the two sides are never equal (`exp` of a nonzero rational is
/// irrational), so refining the Taylor enclosure always terminates.
pub fn exp_at_least(x: &Rational, level: &Rational) -> bool {
    assert!(!x.is_negative(), "exp_at_least needs x >= 0");
    if x.is_zero() {
        return level <= &Rational::one();
    }
    let mut terms = 8;
    loop {
        let (lo, hi) = factorial_bound(x, terms);
        if &lo >= level {
            return true;
        }
        if &hi < level {
            return false;
        }
        terms *= 2;
    }
}

/// Smallest `t` with `2·exp(−ε² t / (3n)) <= δ`.
pub fn chernoff_trials(epsilon: &Rational, delta: &Delta, n: usize) -> Result<u64> {
    if !epsilon.is_positive() || epsilon > &Rational::one() {
        return Err(Error::OutOfRange(alloc::format!("epsilon {epsilon} outside (0, 1]")));
    }
    if n < 2 {
        return Err(Error::OutOfRange(alloc::format!("outcome count {n} below 2")));
    }
    let scale = Rational::from(3 * n as i64) / (epsilon * epsilon);
    match delta {
        Delta::TwoOverExp(k) => {
            // δ < 1 iff e^k > 2.
            if !k.is_positive() || !exp_at_least(k, &Rational::from(2i64)) {
                return Err(Error::OutOfRange(alloc::format!("delta {delta} outside (0, 1)")));
            }
            (scale * k)
                .ceil()
                .to_u64()
                .ok_or_else(|| Error::OutOfRange("trial count overflows".into()))
        }
        Delta::Exact(d) => {
            if !d.is_positive() || d >= &Rational::one() {
                return Err(Error::OutOfRange(alloc::format!("delta {d} outside (0, 1)")));
            }
            let level = Rational::from(2i64) / d;
            let rate = Rational::one() / &scale;
            let holds = |t: u64| exp_at_least(&(&rate * Rational::from(t)), &level);
            let mut hi = 1u64;
            while !holds(hi) {
                hi = hi.checked_mul(2).ok_or_else(|| Error::OutOfRange("trial count overflows".into()))?;
            }
            let mut lo = hi / 2;
            // holds(hi), and lo == 0 or !holds(lo)
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if holds(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let t = hi;
            Ok(t)
        }
    }
}
