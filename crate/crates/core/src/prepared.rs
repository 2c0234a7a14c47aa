//! Pruning and the deterministic dynamic programs over a network:
//! path weights `w̃`, the sample-space weight, path-length extremes and
//! path counts inside an edge subset.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use log::warn;

use crate::error::{Error, Result};
use crate::network::{Edge, EdgeId, EdgeSubset, ReliabilityNetwork, VertexId};

/// Compressed adjacency: for each vertex, its outgoing (or incoming) edge ids
/// in ascending id order.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Adjacency {
    start: Vec<usize>,
    ids: Vec<EdgeId>,
}

impl Adjacency {
    fn build(n: usize, edges: &[Edge], key: impl Fn(&Edge) -> VertexId) -> Self {
        let mut start = vec![0usize; n + 1];
        for e in edges {
            start[key(e) + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut ids = vec![0; edges.len()];
        for (id, e) in edges.iter().enumerate() {
            let v = key(e);
            ids[fill[v]] = id;
            fill[v] += 1;
        }
        Adjacency { start, ids }
    }

    pub(crate) fn outgoing(n: usize, edges: &[Edge]) -> Self {
        Self::build(n, edges, |e| e.tail)
    }

    pub(crate) fn incoming(n: usize, edges: &[Edge]) -> Self {
        Self::build(n, edges, |e| e.head)
    }

    #[inline]
    pub(crate) fn of(&self, v: VertexId) -> &[EdgeId] {
        &self.ids[self.start[v]..self.start[v + 1]]
    }

    #[inline]
    pub(crate) fn range(&self, v: VertexId) -> std::ops::Range<usize> {
        self.start[v]..self.start[v + 1]
    }

    #[inline]
    pub(crate) fn slot(&self, i: usize) -> EdgeId {
        self.ids[i]
    }
}

/// A pruned network in which every edge lies on an s-t path, together with
/// everything the samplers need. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedNetwork {
    base: ReliabilityNetwork,
    source_edges: Vec<EdgeId>,
    topo_order: Vec<VertexId>,
    rank: Vec<usize>,
    out: Adjacency,
    inc: Adjacency,
    edge_weight: Vec<f64>,
    /// Cumulative `w̃` over each vertex's outgoing slots.
    out_prefix: Vec<f64>,
    w_omega: f64,
    l_min: usize,
    l_max: usize,
}

/// Prunes edges that lie on no s-t path and precomputes the DP quantities.
///
/// Edges whose weight `w̃` is zero are dropped as well: this covers `q = 0`
/// edges exactly and edges whose path weights underflow (logged). Returns
/// [`Error::ZeroReliability`] when no s-t path remains.
pub fn preprocess(net: &ReliabilityNetwork) -> Result<PreparedNetwork> {
    let n = net.vertex_count();
    let (s, t) = (net.s(), net.t());
    let mut keep: Vec<EdgeId> = (0..net.edge_count()).collect();

    loop {
        keep = on_st_paths(net, &keep);
        if keep.is_empty() {
            return Err(Error::ZeroReliability);
        }
        let edges: Vec<Edge> = keep.iter().map(|&i| net.edge(i)).collect();
        let q: Vec<f64> = keep.iter().map(|&i| net.q()[i]).collect();
        let order = topo_order_t_last(n, &edges, t);
        let weights = compute_edge_weights_raw(n, &edges, &q, &order, t);

        if weights.iter().any(|&w| w == 0.0) {
            let underflow = keep
                .iter()
                .zip(&weights)
                .filter(|&(&i, &w)| w == 0.0 && net.q()[i] > 0.0)
                .count();
            if underflow > 0 {
                warn!("pruning {underflow} edges whose path weight underflows to zero");
            }
            keep = keep
                .iter()
                .zip(&weights)
                .filter(|&(_, &w)| w > 0.0)
                .map(|(&i, _)| i)
                .collect();
            continue;
        }

        let base = ReliabilityNetwork::new(n, edges, q, s, t)?;
        return Ok(PreparedNetwork::assemble(base, keep, order, weights));
    }
}

/// Edges (from `candidates`) whose tail is reachable from s and whose head
/// reaches t, using only candidate edges.
fn on_st_paths(net: &ReliabilityNetwork, candidates: &[EdgeId]) -> Vec<EdgeId> {
    let n = net.vertex_count();
    let edges: Vec<Edge> = candidates.iter().map(|&i| net.edge(i)).collect();
    let out = Adjacency::outgoing(n, &edges);
    let inc = Adjacency::incoming(n, &edges);

    let mut fwd = vec![false; n];
    let mut stack = vec![net.s()];
    fwd[net.s()] = true;
    while let Some(v) = stack.pop() {
        for &k in out.of(v) {
            let u = edges[k].head;
            if !fwd[u] {
                fwd[u] = true;
                stack.push(u);
            }
        }
    }
    let mut bwd = vec![false; n];
    stack.push(net.t());
    bwd[net.t()] = true;
    while let Some(v) = stack.pop() {
        for &k in inc.of(v) {
            let u = edges[k].tail;
            if !bwd[u] {
                bwd[u] = true;
                stack.push(u);
            }
        }
    }
    if !fwd[net.t()] {
        return Vec::new();
    }
    candidates
        .iter()
        .zip(&edges)
        .filter(|(_, e)| fwd[e.tail] && bwd[e.head])
        .map(|(&i, _)| i)
        .collect()
}

/// Kahn's algorithm, ascending vertex id on ties, with `t` deferred so that
/// it comes last.
fn topo_order_t_last(n: usize, edges: &[Edge], t: VertexId) -> Vec<VertexId> {
    let mut indeg = vec![0usize; n];
    for e in edges {
        indeg[e.head] += 1;
    }
    let out = Adjacency::outgoing(n, edges);
    let mut ready: BinaryHeap<Reverse<(bool, VertexId)>> = (0..n)
        .filter(|&v| indeg[v] == 0)
        .map(|v| Reverse((v == t, v)))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, v))) = ready.pop() {
        order.push(v);
        for &k in out.of(v) {
            let u = edges[k].head;
            indeg[u] -= 1;
            if indeg[u] == 0 {
                ready.push(Reverse((u == t, u)));
            }
        }
    }
    debug_assert_eq!(order.len(), n, "input must be acyclic");
    order
}

fn compute_edge_weights_raw(
    n: usize,
    edges: &[Edge],
    q: &[f64],
    topo_order: &[VertexId],
    t: VertexId,
) -> Vec<f64> {
    let out = Adjacency::outgoing(n, edges);
    // tail_sum[v] = sum of w̃ over δ+(v); the empty product at t is 1.
    let mut tail_sum = vec![0.0f64; n];
    tail_sum[t] = 1.0;
    let mut w = vec![0.0f64; edges.len()];
    for &v in topo_order.iter().rev() {
        if v == t {
            continue;
        }
        let mut sum = 0.0;
        for &e in out.of(v) {
            w[e] = q[e] * tail_sum[edges[e].head];
            sum += w[e];
        }
        tail_sum[v] = sum;
    }
    w
}

/// `w̃(v,u) = q(v,u) · Σ_{e ∈ δ+(u)} w̃(e)`, with `w̃(e) = q(e)` for edges
/// entering t. Requires every edge to lie on an s-t path and `topo_order` to
/// be a topological order of the network.
pub fn compute_edge_weights(net: &ReliabilityNetwork, topo_order: &[VertexId]) -> Vec<f64> {
    compute_edge_weights_raw(net.vertex_count(), net.edges(), net.q(), topo_order, net.t())
}

/// `w(Ω) = Σ_{e ∈ δ+(s)} w̃(e)`: the expected number of intact s-t paths.
pub fn sample_space_weight(pre: &PreparedNetwork) -> f64 {
    pre.out_edges(pre.base.s())
        .iter()
        .map(|&e| pre.edge_weight[e])
        .sum()
}

/// Shortest and longest s-t path lengths, in edges.
pub fn path_length_extremes(pre: &PreparedNetwork) -> (usize, usize) {
    (pre.l_min, pre.l_max)
}

fn compute_extremes(
    n: usize,
    edges: &[Edge],
    out: &Adjacency,
    topo_order: &[VertexId],
    s: VertexId,
    t: VertexId,
) -> (usize, usize) {
    let mut shortest = vec![usize::MAX; n];
    let mut longest = vec![0usize; n];
    shortest[t] = 0;
    for &v in topo_order.iter().rev() {
        if v == t {
            continue;
        }
        for &e in out.of(v) {
            let u = edges[e].head;
            if shortest[u] != usize::MAX {
                shortest[v] = shortest[v].min(shortest[u] + 1);
                longest[v] = longest[v].max(longest[u] + 1);
            }
        }
    }
    (shortest[s], longest[s])
}

/// Number of distinct s-t paths that use only edges of `state`.
///
/// Counts are exact in 64 bits; larger counts give
/// [`Error::PathCountOverflow`].
pub fn count_paths(pre: &PreparedNetwork, state: &EdgeSubset) -> Result<u64> {
    let n = pre.base.vertex_count();
    let edges = pre.base.edges();
    let mut reach = vec![false; n];
    reach[pre.base.s()] = true;
    for &v in &pre.topo_order {
        if !reach[v] {
            continue;
        }
        for &e in pre.out.of(v) {
            if state.contains(e) {
                reach[edges[e].head] = true;
            }
        }
    }
    let mut count = vec![0u64; n];
    count[pre.base.t()] = 1;
    for &v in pre.topo_order.iter().rev() {
        if !reach[v] || v == pre.base.t() {
            continue;
        }
        let mut c = 0u64;
        for &e in pre.out.of(v) {
            if state.contains(e) {
                c = c
                    .checked_add(count[edges[e].head])
                    .ok_or(Error::PathCountOverflow)?;
            }
        }
        count[v] = c;
    }
    Ok(count[pre.base.s()])
}

impl PreparedNetwork {
    fn assemble(
        base: ReliabilityNetwork,
        source_edges: Vec<EdgeId>,
        topo_order: Vec<VertexId>,
        edge_weight: Vec<f64>,
    ) -> Self {
        let n = base.vertex_count();
        let out = Adjacency::outgoing(n, base.edges());
        let inc = Adjacency::incoming(n, base.edges());
        let mut rank = vec![0usize; n];
        for (i, &v) in topo_order.iter().enumerate() {
            rank[v] = i;
        }
        let mut out_prefix = vec![0.0f64; base.edge_count()];
        for v in 0..n {
            let mut acc = 0.0;
            for slot in out.range(v) {
                acc += edge_weight[out.slot(slot)];
                out_prefix[slot] = acc;
            }
        }
        let (l_min, l_max) =
            compute_extremes(n, base.edges(), &out, &topo_order, base.s(), base.t());
        let mut pre = PreparedNetwork {
            base,
            source_edges,
            topo_order,
            rank,
            out,
            inc,
            edge_weight,
            out_prefix,
            w_omega: 0.0,
            l_min,
            l_max,
        };
        pre.w_omega = sample_space_weight(&pre);
        pre
    }

    /// The pruned network. Vertex ids are unchanged; edge ids are renumbered
    /// in their original relative order.
    pub fn base(&self) -> &ReliabilityNetwork {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.base.edge_count()
    }

    /// Id of each retained edge in the network passed to [`preprocess`].
    pub fn source_edges(&self) -> &[EdgeId] {
        &self.source_edges
    }

    pub fn topo_order(&self) -> &[VertexId] {
        &self.topo_order
    }

    pub fn rank(&self, v: VertexId) -> usize {
        self.rank[v]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        self.out.of(v)
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        self.inc.of(v)
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weight
    }

    pub fn w_omega(&self) -> f64 {
        self.w_omega
    }

    pub fn l_min(&self) -> usize {
        self.l_min
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub(crate) fn out_adjacency(&self) -> &Adjacency {
        &self.out
    }

    pub(crate) fn out_prefix(&self) -> &[f64] {
        &self.out_prefix
    }
}
