//! Sequential stopping schemes for means of `[0, 1]`-valued streams.
//!
//! [`sequential_aa`] is the three-phase approximation algorithm of Dagum,
//! Karp, Luby and Ross ("An optimal algorithm for Monte Carlo estimation",
//! SIAM J. Comput. 29(5), 2000). With
//! `Υ(ε, δ) = 4(e−2)·ln(2/δ)/ε²`:
//!
//! 1. Stopping rule with `ε₁ = min(1/2, √ε)`, `δ₁ = δ/3`: draw until the
//!    running sum reaches `Υ₁ = 1 + (1+ε₁)·Υ(ε₁, δ₁)`; `μ̂ = Υ₁/N`.
//! 2. `Υ₂ = 2(1+√ε)(1+2√ε)(1 + ln(3/2)/ln(2/δ))·Υ(ε, δ)`. Draw
//!    `N = ⌈Υ₂·ε/μ̂⌉` pairs, `S = Σ (Z₂ᵢ₋₁ − Z₂ᵢ)²/2`,
//!    `ρ̂ = max(S/N, ε·μ̂)`.
//! 3. Draw `N = ⌈Υ₂·ρ̂/μ̂²⌉` fresh values and return their mean.

use crate::error::{Error, Result};

/// Source of i.i.d. values in `[0, 1]`. `None` means the source is
/// exhausted (a capped stream).
pub trait SampleStream {
    fn next_sample(&mut self) -> Option<f64>;
}

impl<F: FnMut() -> Option<f64>> SampleStream for F {
    fn next_sample(&mut self) -> Option<f64> {
        self()
    }
}

/// `4(e−2)·ln(2/δ)/ε²`.
pub fn upsilon(epsilon: f64, delta: f64) -> f64 {
    4.0 * (std::f64::consts::E - 2.0) * (2.0 / delta).ln() / (epsilon * epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequentialEstimate {
    pub mean: f64,
    pub samples_used: u64,
    /// Phase-1 coarse estimate.
    pub coarse_mean: f64,
    /// Phase-2 variance proxy `ρ̂`.
    pub rho: f64,
}

struct Counted<'a, S: ?Sized> {
    inner: &'a mut S,
    used: u64,
}

impl<S: SampleStream + ?Sized> Counted<'_, S> {
    fn next(&mut self) -> Result<f64> {
        let z = self.inner.next_sample().ok_or(Error::StreamExhausted(self.used))?;
        self.used += 1;
        Ok(z)
    }
}

fn check(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0,1), got {delta}")));
    }
    Ok(())
}

/// The basic stopping rule: returns `(Υ₁/N, N)`.
pub fn stopping_rule<S: SampleStream + ?Sized>(
    stream: &mut S,
    epsilon: f64,
    delta: f64,
) -> Result<(f64, u64)> {
    check(epsilon, delta)?;
    let mut counted = Counted { inner: stream, used: 0 };
    let (mean, n) = stopping_rule_inner(&mut counted, epsilon, delta)?;
    Ok((mean, n))
}

fn stopping_rule_inner<S: SampleStream + ?Sized>(
    stream: &mut Counted<'_, S>,
    epsilon: f64,
    delta: f64,
) -> Result<(f64, u64)> {
    let threshold = 1.0 + (1.0 + epsilon) * upsilon(epsilon, delta);
    let mut n = 0u64;
    let mut sum = 0.0;
    while sum < threshold {
        sum += stream.next()?;
        n += 1;
    }
    Ok((threshold / n as f64, n))
}

/// `(ε, δ)`-approximation of the stream mean (which must be positive).
pub fn sequential_aa<S: SampleStream + ?Sized>(
    stream: &mut S,
    epsilon: f64,
    delta: f64,
) -> Result<SequentialEstimate> {
    check(epsilon, delta)?;
    let mut counted = Counted { inner: stream, used: 0 };

    let coarse_eps = epsilon.sqrt().min(0.5);
    let (coarse, _) = stopping_rule_inner(&mut counted, coarse_eps, delta / 3.0)?;

    let sqrt_eps = epsilon.sqrt();
    let upsilon2 = 2.0
        * (1.0 + sqrt_eps)
        * (1.0 + 2.0 * sqrt_eps)
        * (1.0 + 1.5f64.ln() / (2.0 / delta).ln())
        * upsilon(epsilon, delta);

    let pairs = (upsilon2 * epsilon / coarse).ceil() as u64;
    let mut spread = 0.0;
    for _ in 0..pairs {
        let a = counted.next()?;
        let b = counted.next()?;
        spread += (a - b) * (a - b) / 2.0;
    }
    let rho = (spread / pairs as f64).max(epsilon * coarse);

    let n = (upsilon2 * rho / (coarse * coarse)).ceil() as u64;
    let mut sum = 0.0;
    for _ in 0..n {
        sum += counted.next()?;
    }
    Ok(SequentialEstimate {
        mean: sum / n as f64,
        samples_used: counted.used,
        coarse_mean: coarse,
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;

    #[test]
    fn constant_ones_give_exactly_one() {
        let mut ones = || Some(1.0);
        let est = sequential_aa(&mut ones, 0.1, 0.01).unwrap();
        assert_eq!(est.mean, 1.0);

        // phase 1 stops after ⌈Υ₁⌉ ones
        let (_, n1) = stopping_rule(&mut ones, 0.1f64.sqrt(), 0.01 / 3.0).unwrap();
        let threshold = 1.0 + (1.0 + 0.1f64.sqrt()) * upsilon(0.1f64.sqrt(), 0.01 / 3.0);
        assert_eq!(n1, threshold.ceil() as u64);
        assert!(est.samples_used > n1);
    }

    #[test]
    fn capped_stream_is_an_error() {
        let mut left = 10;
        let mut capped = || {
            if left == 0 {
                None
            } else {
                left -= 1;
                Some(1.0)
            }
        };
        assert_eq!(sequential_aa(&mut capped, 0.1, 0.1), Err(Error::StreamExhausted(10)));
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut ones = || Some(1.0);
        assert!(sequential_aa(&mut ones, 1.0, 0.1).is_err());
        assert!(sequential_aa(&mut ones, 0.1, 0.0).is_err());
        assert!(stopping_rule(&mut ones, 0.0, 0.1).is_err());
    }

    #[test]
    fn bernoulli_half_coverage() {
        let (eps, delta, runs) = (0.2, 0.05, 400);
        let mut inside = 0;
        for r in 0..runs {
            let mut rng = RandomStream::with_index(77, r);
            let mut coin = || Some(if rng.bernoulli(0.5) { 1.0 } else { 0.0 });
            let est = sequential_aa(&mut coin, eps, delta).unwrap();
            if (0.4..=0.6).contains(&est.mean) {
                inside += 1;
            }
        }
        assert!(inside as f64 >= 0.95 * runs as f64, "{inside}/{runs}");
    }
}
