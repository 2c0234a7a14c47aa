//! Reliability estimators.
//!
//! * Direct Monte-Carlo: the mean of independent 0/1 connectivity trials.
//! * Path-based Monte-Carlo: draw `(γ, a)` from the sample space with
//!   probability `w(a)/w(Ω)`, average an influence value whose expectation is
//!   `w(A)/w(Ω)`, and scale by `w(Ω)`.
//!
//! Either runs for a fixed number of samples or under the sequential
//! scheme of [`crate::stopping`].
//!
//! Fixed-N runs split the samples over `workers` threads. Worker `w` draws
//! from substream `w` of the seed and reduces its own samples in draw order;
//! partial sums are merged in ascending worker order. Results are therefore
//! bit-identical for a fixed `(seed, workers)` pair.

use std::fmt;
use std::time::{Duration, Instant};

use log::warn;

use crate::error::{Error, Result};
use crate::json::JsonObject;
use crate::network::ReliabilityNetwork;
use crate::prepared::{preprocess, PreparedNetwork};
use crate::rng::RandomStream;
use crate::sampling::{canonical_path, OmegaSample, PathCount, Sampler};
use crate::stopping::sequential_aa;

/// `4(e−2)`, the leading constant of the zero-one estimator bounds.
const ZERO_ONE_CONSTANT: f64 = 4.0 * (std::f64::consts::E - 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Influence {
    /// `1/|P(a)|`
    Psi,
    /// 1 if `γ` is the canonical path of `a`, else 0
    Xi,
}

/// `1/|P(a)|`; 0 when the path count saturated.
pub fn influence_psi(sample: &OmegaSample) -> f64 {
    match sample.path_count {
        PathCount::Exact(0) => panic!("an omega sample contains at least one path"),
        PathCount::Exact(c) => 1.0 / c as f64,
        PathCount::Saturated => 0.0,
    }
}

pub fn influence_xi(pre: &PreparedNetwork, sample: &OmegaSample) -> f64 {
    match canonical_path(pre, &sample.state) {
        Ok(p) if p == sample.path => 1.0,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    PathXi,
    PathPsi,
}

impl Method {
    pub fn path(influence: Influence) -> Self {
        match influence {
            Influence::Psi => Method::PathPsi,
            Influence::Xi => Method::PathXi,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::PathXi => "path-xi",
            Method::PathPsi => "path-psi",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Target relative error `epsilon` with failure probability `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub epsilon: f64,
    pub delta: f64,
}

impl Accuracy {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0,1), got {epsilon}"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0,1), got {delta}"
            )));
        }
        Ok(Accuracy { epsilon, delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StoppingScheme {
    /// Exactly `samples` draws; `accuracy` records the contract the sample
    /// count was sized for.
    FixedN { samples: u64, accuracy: Accuracy },
    SequentialAa(Accuracy),
}

impl StoppingScheme {
    pub fn fixed(samples: u64, accuracy: Accuracy) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidParameter("fixed sample count must be at least 1".into()));
        }
        Ok(StoppingScheme::FixedN { samples, accuracy })
    }

    pub fn accuracy(&self) -> Accuracy {
        match *self {
            StoppingScheme::FixedN { accuracy, .. } | StoppingScheme::SequentialAa(accuracy) => {
                accuracy
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StoppingScheme::FixedN { .. } => "fixed-n",
            StoppingScheme::SequentialAa(_) => "sequential-aa",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Threads for fixed-N runs. The sequential scheme always runs serially.
    pub workers: usize,
    /// Hard cap on draws; exceeding it is [`Error::StreamExhausted`].
    pub max_samples: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: 1,
            max_samples: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub estimate: f64,
    pub method: Method,
    pub scheme: &'static str,
    pub samples_used: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub w_omega: Option<f64>,
    pub elapsed: Duration,
}

impl EstimateResult {
    /// The short-circuit result for networks without any s-t path.
    pub fn zero_reliability(method: Method, scheme: &StoppingScheme, seed: u64) -> Self {
        let acc = scheme.accuracy();
        EstimateResult {
            estimate: 0.0,
            method,
            scheme: scheme.name(),
            samples_used: 0,
            epsilon: acc.epsilon,
            delta: acc.delta,
            seed,
            w_omega: Some(0.0),
            elapsed: Duration::ZERO,
        }
    }

    pub fn is_zero_reliability(&self) -> bool {
        self.samples_used == 0
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1e3
    }

    /// One JSON object with fields in declaration order.
    pub fn to_json(&self) -> String {
        JsonObject::new()
            .f64("estimate", self.estimate)
            .str("method", self.method.as_str())
            .str("scheme", self.scheme)
            .u64("samples_used", self.samples_used)
            .f64("epsilon", self.epsilon)
            .f64("delta", self.delta)
            .u64("seed", self.seed)
            .opt_f64("w_omega", self.w_omega)
            .f64("elapsed", self.elapsed_ms())
            .finish()
    }
}

fn to_sample_count(n: f64) -> Result<u64> {
    // 2^63 keeps the count well inside u64 after the ceiling.
    if !n.is_finite() || n > 9.223_372_036_854_776e18 {
        return Err(Error::InvalidParameter(format!("sample count {n} is not representable")));
    }
    Ok((n.ceil() as u64).max(1))
}

/// `⌈4(e−2)·ln(2/δ) / (ε²·lb)⌉` samples for the direct estimator, where `lb`
/// is a lower bound on the reliability.
pub fn fixed_sample_count_direct(epsilon: f64, delta: f64, rel_lower_bound: f64) -> Result<u64> {
    Accuracy::new(epsilon, delta)?;
    if !(rel_lower_bound > 0.0 && rel_lower_bound <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "reliability lower bound must lie in (0,1], got {rel_lower_bound}"
        )));
    }
    to_sample_count(ZERO_ONE_CONSTANT * (2.0 / delta).ln() / (epsilon * epsilon * rel_lower_bound))
}

/// `⌈4(e−2)·ln(2/δ)·r / ε²⌉` samples for the path estimators, where `r`
/// bounds `w(Ω)/w(A)` from above.
pub fn fixed_sample_count_pathmc(epsilon: f64, delta: f64, ratio_upper_bound: f64) -> Result<u64> {
    Accuracy::new(epsilon, delta)?;
    if !(ratio_upper_bound >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "ratio bound must be at least 1, got {ratio_upper_bound}"
        )));
    }
    to_sample_count(ZERO_ONE_CONSTANT * (2.0 / delta).ln() * ratio_upper_bound / (epsilon * epsilon))
}

fn worker_shares(total: u64, workers: usize) -> Vec<u64> {
    let w = workers.max(1) as u64;
    (0..w).map(|i| total / w + u64::from(i < total % w)).collect()
}

/// Runs `draw` for `total` samples split over workers and returns the sum
/// of the draws, merged in worker order.
fn fixed_sum<F>(
    pre: &PreparedNetwork,
    rng: &RandomStream,
    total: u64,
    workers: usize,
    draw: F,
) -> (f64, u64)
where
    F: Fn(&mut Sampler<'_>, &mut RandomStream) -> f64 + Sync,
{
    let run = |index: usize, count: u64| {
        let mut stream = rng.substream(index as u64);
        let mut sampler = Sampler::new(pre);
        let mut sum = 0.0;
        for _ in 0..count {
            sum += draw(&mut sampler, &mut stream);
        }
        (sum, sampler.saturations())
    };
    let shares = worker_shares(total, workers);
    let partials: Vec<(f64, u64)> = if shares.len() == 1 {
        vec![run(0, shares[0])]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = shares
                .iter()
                .enumerate()
                .map(|(i, &count)| {
                    let run = &run;
                    scope.spawn(move || run(i, count))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    partials
        .into_iter()
        .fold((0.0, 0), |(s, k), (ps, pk)| (s + ps, k + pk))
}

fn run_sequential<F>(
    pre: &PreparedNetwork,
    rng: &RandomStream,
    accuracy: Accuracy,
    options: &RunOptions,
    mut draw: F,
) -> Result<(f64, u64, u64)>
where
    F: FnMut(&mut Sampler<'_>, &mut RandomStream) -> f64,
{
    if options.workers > 1 {
        log::debug!("sequential scheme runs on a single worker");
    }
    let mut stream = rng.substream(0);
    let mut sampler = Sampler::new(pre);
    let cap = options.max_samples.unwrap_or(u64::MAX);
    let mut used = 0u64;
    let mut source = || {
        if used == cap {
            return None;
        }
        used += 1;
        Some(draw(&mut sampler, &mut stream))
    };
    let est = sequential_aa(&mut source, accuracy.epsilon, accuracy.delta)?;
    Ok((est.mean, est.samples_used, sampler.saturations()))
}

fn check_fixed_cap(samples: u64, options: &RunOptions) -> Result<()> {
    match options.max_samples {
        Some(cap) if samples > cap => Err(Error::StreamExhausted(cap)),
        _ => Ok(()),
    }
}

/// Direct Monte-Carlo estimate of the reliability.
pub fn direct_estimate(
    pre: &PreparedNetwork,
    scheme: &StoppingScheme,
    rng: &RandomStream,
    options: &RunOptions,
) -> Result<EstimateResult> {
    let start = Instant::now();
    let trial = |s: &mut Sampler<'_>, r: &mut RandomStream| f64::from(u8::from(s.draw_direct(r)));
    let (estimate, samples_used) = match *scheme {
        StoppingScheme::FixedN { samples, .. } => {
            check_fixed_cap(samples, options)?;
            let (hits, _) = fixed_sum(pre, rng, samples, options.workers, trial);
            (hits / samples as f64, samples)
        }
        StoppingScheme::SequentialAa(acc) => {
            let (mean, used, _) = run_sequential(pre, rng, acc, options, trial)?;
            (mean, used)
        }
    };
    let acc = scheme.accuracy();
    Ok(EstimateResult {
        estimate,
        method: Method::Direct,
        scheme: scheme.name(),
        samples_used,
        epsilon: acc.epsilon,
        delta: acc.delta,
        seed: rng.seed(),
        w_omega: None,
        elapsed: start.elapsed(),
    })
}

/// Path-based estimate: mean influence times `w(Ω)`.
pub fn path_mc_estimate(
    pre: &PreparedNetwork,
    influence: Influence,
    scheme: &StoppingScheme,
    rng: &RandomStream,
    options: &RunOptions,
) -> Result<EstimateResult> {
    let start = Instant::now();
    let draw = |s: &mut Sampler<'_>, r: &mut RandomStream| s.draw_influence(r, influence);
    let (mean, samples_used, saturations) = match *scheme {
        StoppingScheme::FixedN { samples, .. } => {
            check_fixed_cap(samples, options)?;
            let (sum, sat) = fixed_sum(pre, rng, samples, options.workers, draw);
            (sum / samples as f64, samples, sat)
        }
        StoppingScheme::SequentialAa(acc) => run_sequential(pre, rng, acc, options, draw)?,
    };
    if saturations > 0 {
        warn!("{saturations} samples had more than 2^64 s-t paths and contributed influence 0");
    }
    let acc = scheme.accuracy();
    Ok(EstimateResult {
        estimate: mean * pre.w_omega(),
        method: Method::path(influence),
        scheme: scheme.name(),
        samples_used,
        epsilon: acc.epsilon,
        delta: acc.delta,
        seed: rng.seed(),
        w_omega: Some(pre.w_omega()),
        elapsed: start.elapsed(),
    })
}

/// Preprocesses `net` and runs `method`, short-circuiting networks without
/// any s-t path to an estimate of exactly zero.
pub fn estimate_network(
    net: &ReliabilityNetwork,
    method: Method,
    scheme: &StoppingScheme,
    seed: u64,
    options: &RunOptions,
) -> Result<EstimateResult> {
    let pre = match preprocess(net) {
        Ok(pre) => pre,
        Err(Error::ZeroReliability) => {
            return Ok(EstimateResult::zero_reliability(method, scheme, seed))
        }
        Err(e) => return Err(e),
    };
    let rng = RandomStream::new(seed);
    match method {
        Method::Direct => direct_estimate(&pre, scheme, &rng, options),
        Method::PathPsi => path_mc_estimate(&pre, Influence::Psi, scheme, &rng, options),
        Method::PathXi => path_mc_estimate(&pre, Influence::Xi, scheme, &rng, options),
    }
}
