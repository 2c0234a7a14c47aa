//! Brute-force ground truth for tiny networks.
//!
//! Nothing here reuses the sampling or preprocessing code paths: states are
//! enumerated as bitmasks, s-t paths are listed by depth-first search, and
//! the canonical path is recomputed from its definition.

use crate::density::Rational;
use crate::error::{Error, Result};
use crate::estimators::Influence;
use crate::json::JsonObject;
use crate::network::ReliabilityNetwork;
use crate::prepared::{preprocess, PreparedNetwork};

pub const RELIABILITY_EDGE_CAP: usize = 24;
pub const MOMENTS_EDGE_CAP: usize = 20;
pub const DENSITY_VERTEX_CAP: usize = 14;

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_cap(what: &'static str, actual: usize, cap: usize) -> Result<()> {
    if actual > cap {
        Err(Error::CapExceeded { what, actual, cap })
    } else {
        Ok(())
    }
}

fn state_weight(net: &ReliabilityNetwork, mask: u64) -> f64 {
    (0..net.edge_count())
        .map(|e| if mask >> e & 1 == 1 { net.q()[e] } else { net.p(e) })
        .product()
}

/// Edge ids ordered by the topological rank of their tail.
fn edges_in_topological_order(net: &ReliabilityNetwork) -> Vec<usize> {
    let order = net.topological_order().expect("networks are acyclic");
    let mut rank = vec![0; net.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut ids: Vec<usize> = (0..net.edge_count()).collect();
    ids.sort_by_key(|&e| (rank[net.edge(e).tail], e));
    ids
}

fn reaches(net: &ReliabilityNetwork, sweep: &[usize], mask: u64, reach: &mut [bool]) -> bool {
    reach.fill(false);
    reach[net.s()] = true;
    for &e in sweep {
        let edge = net.edge(e);
        if mask >> e & 1 == 1 && reach[edge.tail] {
            reach[edge.head] = true;
        }
    }
    reach[net.t()]
}

/// `REL_{s,t}` as the total weight of all intact states, up to
/// [`RELIABILITY_EDGE_CAP`] edges.
pub fn exact_reliability(net: &ReliabilityNetwork) -> Result<f64> {
    exact_reliability_capped(net, RELIABILITY_EDGE_CAP)
}

pub fn exact_reliability_capped(net: &ReliabilityNetwork, cap: usize) -> Result<f64> {
    let m = net.edge_count();
    check_cap("edge", m, cap.min(63))?;
    let sweep = edges_in_topological_order(net);
    let mut reach = vec![false; net.vertex_count()];
    let mut total = CompensatedSum::default();
    // Gray-code order: consecutive states differ in one edge.
    for i in 0..1u64 << m {
        let mask = i ^ (i >> 1);
        if reaches(net, &sweep, mask, &mut reach) {
            total.add(state_weight(net, mask));
        }
    }
    Ok(total.value())
}

/// Every s-t path as an edge bitmask, in depth-first order over ascending
/// edge ids.
pub fn enumerate_paths(net: &ReliabilityNetwork) -> Result<Vec<u64>> {
    check_cap("edge", net.edge_count(), 63)?;
    let mut out_edges = vec![Vec::new(); net.vertex_count()];
    for (id, e) in net.edges().iter().enumerate() {
        out_edges[e.tail].push(id);
    }
    let mut paths = Vec::new();
    let mut stack = vec![(net.s(), 0u64, 0usize)];
    while let Some((v, mask, next)) = stack.pop() {
        if v == net.t() {
            paths.push(mask);
            continue;
        }
        if let Some(&e) = out_edges[v].get(next) {
            stack.push((v, mask, next + 1));
            stack.push((net.edge(e).head, mask | 1 << e, 0));
        }
    }
    Ok(paths)
}

/// `w(Ω) = Σ_γ Π_{e∈γ} q(e)` by explicit path listing.
pub fn exact_sample_space_weight(net: &ReliabilityNetwork) -> Result<f64> {
    let mut total = CompensatedSum::default();
    for mask in enumerate_paths(net)? {
        total.add(
            (0..net.edge_count())
                .filter(|e| mask >> e & 1 == 1)
                .map(|e| net.q()[e])
                .product(),
        );
    }
    Ok(total.value())
}

/// Canonical path of the state `state` (edge bitmask) recomputed from its
/// definition; `None` if the state is not intact.
pub fn canonical_path_mask(net: &ReliabilityNetwork, state: u64) -> Option<u64> {
    let n = net.vertex_count();
    let order = net.topological_order().expect("networks are acyclic");
    let mut to_t = vec![false; n];
    to_t[net.t()] = true;
    for &v in order.iter().rev() {
        for (id, e) in net.edges().iter().enumerate() {
            if e.tail == v && state >> id & 1 == 1 && to_t[e.head] {
                to_t[v] = true;
            }
        }
    }
    if !to_t[net.s()] {
        return None;
    }
    let mut mask = 0;
    let mut v = net.s();
    while v != net.t() {
        let (id, e) = net
            .edges()
            .iter()
            .enumerate()
            .find(|&(id, e)| e.tail == v && state >> id & 1 == 1 && to_t[e.head])?;
        mask |= 1 << id;
        v = e.head;
    }
    Some(mask)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Exact mean and variance of an influence value under the normalised
/// sample-space distribution, up to [`MOMENTS_EDGE_CAP`] edges.
pub fn exact_omega_moments(pre: &PreparedNetwork, influence: Influence) -> Result<OmegaMoments> {
    exact_omega_moments_capped(pre.base(), influence, MOMENTS_EDGE_CAP)
}

pub fn exact_omega_moments_capped(
    net: &ReliabilityNetwork,
    influence: Influence,
    cap: usize,
) -> Result<OmegaMoments> {
    let m = net.edge_count();
    check_cap("edge", m, cap.min(63))?;
    let paths = enumerate_paths(net)?;
    // (weight, value) atoms of the unnormalised distribution, merged per state
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    for a in 0..1u64 << m {
        let inside = paths.iter().filter(|&&g| g & !a == 0).count();
        if inside == 0 {
            continue;
        }
        let w = state_weight(net, a);
        let k = inside as f64;
        match influence {
            Influence::Psi => atoms.push((w * k, 1.0 / k)),
            Influence::Xi => {
                // exactly one contained path is the canonical one
                debug_assert!(canonical_path_mask(net, a).is_some_and(|c| paths.contains(&c)));
                atoms.push((w, 1.0));
                if inside > 1 {
                    atoms.push((w * (k - 1.0), 0.0));
                }
            }
        }
    }
    let mut total = CompensatedSum::default();
    let mut first = CompensatedSum::default();
    for &(w, x) in &atoms {
        total.add(w);
        first.add(w * x);
    }
    let total = total.value();
    if total == 0.0 {
        return Err(Error::ZeroReliability);
    }
    let mean = first.value() / total;
    let mut second = CompensatedSum::default();
    for &(w, x) in &atoms {
        second.add(w * (x - mean) * (x - mean));
    }
    Ok(OmegaMoments {
        mean,
        variance: second.value() / total,
    })
}

/// Maximum of `|E(U)|/|U|` over nonempty vertex subsets, up to
/// [`DENSITY_VERTEX_CAP`] vertices.
pub fn exact_edge_vertex_bound(net: &ReliabilityNetwork) -> Result<Rational> {
    let n = net.vertex_count();
    check_cap("vertex", n, DENSITY_VERTEX_CAP)?;
    let mut best = Rational::new(0, 1);
    for set in 1u32..1 << n {
        let inside = net
            .edges()
            .iter()
            .filter(|e| set >> e.tail & 1 == 1 && set >> e.head & 1 == 1)
            .count() as u64;
        best = best.max(Rational::new(inside, set.count_ones() as u64));
    }
    Ok(best)
}

/// Everything the `exact` command reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSummary {
    pub reliability: f64,
    /// `w(Ω)/w(A)`; `None` when the reliability is zero.
    pub ratio: Option<f64>,
    pub xi_variance: Option<f64>,
    pub psi_variance: Option<f64>,
}

impl ExactSummary {
    pub fn to_json(&self) -> String {
        JsonObject::new()
            .f64("reliability", self.reliability)
            .opt_f64("ratio", self.ratio)
            .opt_f64("xi_variance", self.xi_variance)
            .opt_f64("psi_variance", self.psi_variance)
            .finish()
    }
}

pub fn exact_summary(net: &ReliabilityNetwork) -> Result<ExactSummary> {
    check_cap("edge", net.edge_count(), MOMENTS_EDGE_CAP)?;
    let reliability = exact_reliability(net)?;
    let pre = match preprocess(net) {
        Ok(pre) => pre,
        Err(Error::ZeroReliability) => {
            return Ok(ExactSummary {
                reliability,
                ratio: None,
                xi_variance: None,
                psi_variance: None,
            })
        }
        Err(e) => return Err(e),
    };
    let xi = exact_omega_moments(&pre, Influence::Xi)?;
    let psi = exact_omega_moments(&pre, Influence::Psi)?;
    Ok(ExactSummary {
        reliability,
        ratio: Some(exact_sample_space_weight(net)? / reliability),
        xi_variance: Some(xi.variance),
        psi_variance: Some(psi.variance),
    })
}
