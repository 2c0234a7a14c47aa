//! A-priori bounds on `w(Ω)/w(A)` and the sample counts they imply.

use log::warn;

use crate::density::{edge_vertex_bound_exact, edge_vertex_bound_simple, Rational};
use crate::error::{Error, Result};
use crate::estimators::{fixed_sample_count_direct, fixed_sample_count_pathmc};
use crate::json::JsonObject;
use crate::network::ReliabilityNetwork;
use crate::prepared::PreparedNetwork;

/// Largest vertex count for which the cut-based edge-vertex bound is run
/// from [`build_bound_report`].
pub const EXACT_MU_VERTEX_CAP: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuMode {
    Simple,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recommendation {
    Direct,
    PathMc,
}

impl Recommendation {
    pub fn as_str(self) -> &'static str {
        match self {
            Recommendation::Direct => "direct",
            Recommendation::PathMc => "path-mc",
        }
    }
}

/// Karp–Luby bound: `Π_e (1 + q(e))`.
pub fn karp_luby_bound(net: &ReliabilityNetwork) -> f64 {
    net.q().iter().map(|q| 1.0 + q).product()
}

/// `(1 + q̄)^m`, only for uniform networks.
pub fn karp_luby_uniform_bound(net: &ReliabilityNetwork) -> Option<f64> {
    net.uniform_q()
        .map(|q| (1.0 + q).powi(net.edge_count() as i32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImprovedBound {
    pub bound: f64,
    /// `(2/(2−q̄))^(m−l_min)`
    pub term1: f64,
    /// `2^(1 + (μ/m)(q̄m + ln 2)(q̄m + ln 2 + l_max))`
    pub term2: f64,
}

/// Bound on `w(Ω)/w(A)` for uniform edge probability `q̄` from the edge
/// count, an edge-vertex bound `μ` and the s-t path length extremes.
pub fn improved_bound(
    m: usize,
    q_bar: f64,
    mu: f64,
    l_min: usize,
    l_max: usize,
) -> Result<ImprovedBound> {
    if !(0.0..=1.0).contains(&q_bar) {
        return Err(Error::InvalidParameter(format!("q̄ must lie in [0,1], got {q_bar}")));
    }
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("μ must be positive, got {mu}")));
    }
    if !(1 <= l_min && l_min <= l_max && l_max <= m) {
        return Err(Error::InvalidParameter(format!(
            "need 1 ≤ l_min ≤ l_max ≤ m, got {l_min}, {l_max}, {m}"
        )));
    }
    let term1 = (2.0 / (2.0 - q_bar)).powf((m - l_min) as f64);
    let mf = m as f64;
    let spread = q_bar * mf + std::f64::consts::LN_2;
    let term2 = (1.0 + mu / mf * spread * (spread + l_max as f64)).exp2();
    Ok(ImprovedBound {
        bound: term1.min(term2),
        term1,
        term2,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub w_omega: f64,
    pub m: usize,
    pub l_min: usize,
    pub l_max: usize,
    pub mu_simple: Rational,
    pub mu_exact: Option<Rational>,
    pub karp_bound: f64,
    pub karp_uniform_bound: Option<f64>,
    pub improved_bound: Option<f64>,
    pub improved_term1: Option<f64>,
    pub improved_term2: Option<f64>,
    pub n_direct: Option<u64>,
    /// `None` when the best ratio bound is too large for a sample count.
    pub n_pathmc: Option<u64>,
    pub recommendation: Recommendation,
}

impl BoundReport {
    /// The sharpest available upper bound on `w(Ω)/w(A)`.
    pub fn best_ratio_bound(&self) -> f64 {
        self.improved_bound
            .map_or(self.karp_bound, |b| b.min(self.karp_bound))
    }

    pub fn mu(&self) -> Rational {
        self.mu_exact.unwrap_or(self.mu_simple)
    }

    /// Absent optional quantities are omitted from the object.
    pub fn to_json(&self) -> String {
        let mut obj = JsonObject::new()
            .f64("w_omega", self.w_omega)
            .u64("m", self.m as u64)
            .u64("l_min", self.l_min as u64)
            .u64("l_max", self.l_max as u64)
            .raw("mu_simple", &self.mu_simple.to_json());
        if let Some(mu) = self.mu_exact {
            obj = obj.raw("mu_exact", &mu.to_json());
        }
        obj.f64("karp_bound", self.karp_bound)
            .some_f64("karp_uniform_bound", self.karp_uniform_bound)
            .some_f64("improved_bound", self.improved_bound)
            .some_f64("improved_term1", self.improved_term1)
            .some_f64("improved_term2", self.improved_term2)
            .some_u64("n_direct", self.n_direct)
            .some_u64("n_pathmc", self.n_pathmc)
            .str("recommendation", self.recommendation.as_str())
            .finish()
    }
}

/// Fills every a-priori quantity for `pre`. The improved bound is only
/// reported for uniform `q`; it uses the exact `μ` when available.
pub fn build_bound_report(
    pre: &PreparedNetwork,
    epsilon: f64,
    delta: f64,
    rel_lower_bound: Option<f64>,
    mu_mode: MuMode,
) -> Result<BoundReport> {
    let net = pre.base();
    let m = net.edge_count();
    let mu_simple = edge_vertex_bound_simple(net);
    let mu_exact = match mu_mode {
        MuMode::Simple => None,
        MuMode::Exact if net.vertex_count() <= EXACT_MU_VERTEX_CAP => {
            Some(edge_vertex_bound_exact(net))
        }
        MuMode::Exact => {
            warn!(
                "exact edge-vertex bound skipped for {} vertices (cap {EXACT_MU_VERTEX_CAP}); using Δmax/2",
                net.vertex_count()
            );
            None
        }
    };
    let mu = mu_exact.unwrap_or(mu_simple);
    let karp_bound = karp_luby_bound(net);
    let improved = match net.uniform_q() {
        Some(q_bar) => Some(improved_bound(m, q_bar, mu.to_f64(), pre.l_min(), pre.l_max())?),
        None => None,
    };
    let best = improved.map_or(karp_bound, |b| b.bound.min(karp_bound));
    let n_pathmc = fixed_sample_count_pathmc(epsilon, delta, best).ok();
    let n_direct = rel_lower_bound
        .map(|lb| fixed_sample_count_direct(epsilon, delta, lb))
        .transpose()?;
    let w_omega = pre.w_omega();
    Ok(BoundReport {
        w_omega,
        m,
        l_min: pre.l_min(),
        l_max: pre.l_max(),
        mu_simple,
        mu_exact,
        karp_bound,
        karp_uniform_bound: karp_luby_uniform_bound(net),
        improved_bound: improved.map(|b| b.bound),
        improved_term1: improved.map(|b| b.term1),
        improved_term2: improved.map(|b| b.term2),
        n_direct,
        n_pathmc,
        recommendation: if w_omega < 1.0 {
            Recommendation::PathMc
        } else {
            Recommendation::Direct
        },
    })
}
