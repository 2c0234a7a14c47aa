//! Random objects over a prepared network: weighted s-t paths, frontier
//! completions `(γ, a)` of the sample space, direct Bernoulli states, and
//! the canonical path of an intact state.
//!
//! [`Sampler`] owns the per-worker scratch buffers and is what the
//! estimators drive. Scratch is reset by touching only the entries used by
//! the last draw, so a draw costs time proportional to the part of the
//! network it reveals, not to `n + m`.

use crate::error::{Error, Result};
use crate::estimators::Influence;
use crate::network::{EdgeId, EdgeSubset, VertexId};
use crate::prepared::{count_paths, PreparedNetwork};
use crate::rng::RandomStream;

/// An s-t path as the ordered list of its edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathSample {
    pub edges: Vec<EdgeId>,
}

impl PathSample {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `w(γ) = Π_{e∈γ} q(e)`.
    pub fn weight(&self, pre: &PreparedNetwork) -> f64 {
        self.edges.iter().map(|&e| pre.base().q()[e]).product()
    }

    /// Vertices along the path, starting at s.
    pub fn vertices(&self, pre: &PreparedNetwork) -> Vec<VertexId> {
        let net = pre.base();
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        out.push(net.s());
        out.extend(self.edges.iter().map(|&e| net.edge(e).head));
        out
    }
}

/// `|P(a)|`, or a marker that it did not fit in 64 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCount {
    Exact(u64),
    Saturated,
}

/// One element `(γ, a)` of the sample space. `state` holds the revealed
/// intact edges: the path plus every appeared edge whose tail is reachable
/// from s; unrevealed edges cannot lie on an s-t path of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSample {
    pub path: PathSample,
    pub state: EdgeSubset,
    pub path_count: PathCount,
}

/// Draws `γ` with probability `w(γ)/w(Ω)`.
pub fn sample_path(pre: &PreparedNetwork, rng: &mut RandomStream) -> PathSample {
    let mut edges = Vec::new();
    walk_weighted_path(pre, rng, &mut edges);
    PathSample { edges }
}

/// Reveals the edges reachable from the path's vertices and counts the s-t
/// paths of the resulting state.
pub fn extend_to_state(
    pre: &PreparedNetwork,
    path: &PathSample,
    rng: &mut RandomStream,
) -> OmegaSample {
    let mut sampler = Sampler::new(pre);
    sampler.path.clone_from(&path.edges);
    sampler.reveal_from_path(rng);
    let sample = sampler.snapshot();
    sampler.reset();
    sample
}

/// One direct Monte-Carlo trial: does s reach t after independent failures?
pub fn sample_direct_state(pre: &PreparedNetwork, rng: &mut RandomStream) -> bool {
    Sampler::new(pre).draw_direct(rng)
}

/// The representative path of an intact state: starting at s, repeatedly
/// take the smallest-id intact outgoing edge whose head still reaches t
/// within the state.
pub fn canonical_path(pre: &PreparedNetwork, state: &EdgeSubset) -> Result<PathSample> {
    let net = pre.base();
    let mut reaches_t = vec![false; net.vertex_count()];
    reaches_t[net.t()] = true;
    for &v in pre.topo_order().iter().rev() {
        reaches_t[v] |= pre
            .out_edges(v)
            .iter()
            .any(|&e| state.contains(e) && reaches_t[net.edge(e).head]);
    }
    if !reaches_t[net.s()] {
        return Err(Error::NoPath);
    }
    let mut edges = Vec::new();
    let mut v = net.s();
    while v != net.t() {
        let e = *pre
            .out_edges(v)
            .iter()
            .find(|&&e| state.contains(e) && reaches_t[net.edge(e).head])
            .expect("a vertex that reaches t has a continuing edge");
        edges.push(e);
        v = net.edge(e).head;
    }
    Ok(PathSample { edges })
}

fn walk_weighted_path(pre: &PreparedNetwork, rng: &mut RandomStream, out: &mut Vec<EdgeId>) {
    let net = pre.base();
    let adj = pre.out_adjacency();
    let prefix = pre.out_prefix();
    out.clear();
    let mut v = net.s();
    while v != net.t() {
        let range = adj.range(v);
        let cum = &prefix[range.clone()];
        let target = rng.uniform() * cum[cum.len() - 1];
        let pick = cum.partition_point(|&c| c <= target).min(cum.len() - 1);
        let e = adj.slot(range.start + pick);
        out.push(e);
        v = net.edge(e).head;
    }
}

/// Per-worker sampler over a shared [`PreparedNetwork`].
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    pre: &'a PreparedNetwork,
    path: Vec<EdgeId>,
    revealed: Vec<bool>,
    intact: Vec<bool>,
    touched: Vec<EdgeId>,
    reachable: Vec<bool>,
    frontier: Vec<VertexId>,
    count: Vec<u64>,
    saturated: Vec<bool>,
    draws: usize,
    saturations: u64,
}

impl<'a> Sampler<'a> {
    pub fn new(pre: &'a PreparedNetwork) -> Self {
        let n = pre.vertex_count();
        let m = pre.edge_count();
        Sampler {
            pre,
            path: Vec::new(),
            revealed: vec![false; m],
            intact: vec![false; m],
            touched: Vec::new(),
            reachable: vec![false; n],
            frontier: Vec::new(),
            count: vec![0; n],
            saturated: vec![false; n],
            draws: 0,
            saturations: 0,
        }
    }

    pub fn network(&self) -> &'a PreparedNetwork {
        self.pre
    }

    /// Bernoulli draws made by the most recent call.
    pub fn last_draw_count(&self) -> usize {
        self.draws
    }

    /// Draws whose path count overflowed since this sampler was created.
    pub fn saturations(&self) -> u64 {
        self.saturations
    }

    /// Draws `(γ, a)` with probability `w(a)/w(Ω)` and returns its influence
    /// value.
    pub fn draw_influence(&mut self, rng: &mut RandomStream, influence: Influence) -> f64 {
        walk_weighted_path(self.pre, rng, &mut self.path);
        self.reveal_from_path(rng);
        let value = match influence {
            Influence::Psi => match self.count_state_paths() {
                PathCount::Exact(c) => 1.0 / c as f64,
                PathCount::Saturated => {
                    self.saturations += 1;
                    0.0
                }
            },
            Influence::Xi => {
                // the DP marks which frontier vertices reach t
                if self.count_state_paths() == PathCount::Saturated {
                    self.saturations += 1;
                }
                if self.path_is_canonical() {
                    1.0
                } else {
                    0.0
                }
            }
        };
        self.reset();
        value
    }

    /// Draws `(γ, a)` and returns it in full.
    pub fn draw_sample(&mut self, rng: &mut RandomStream) -> OmegaSample {
        walk_weighted_path(self.pre, rng, &mut self.path);
        self.reveal_from_path(rng);
        let sample = self.snapshot();
        self.reset();
        sample
    }

    /// Direct trial using frontier revelation from s; stops as soon as t is
    /// reached.
    pub fn draw_direct(&mut self, rng: &mut RandomStream) -> bool {
        let net = self.pre.base();
        let adj = self.pre.out_adjacency();
        let q = net.q();
        let (s, t) = (net.s(), net.t());
        self.draws = 0;
        self.reachable[s] = true;
        self.frontier.push(s);
        let mut head = 0;
        let mut connected = false;
        'grow: while head < self.frontier.len() {
            let v = self.frontier[head];
            head += 1;
            for &e in adj.of(v) {
                self.draws += 1;
                if rng.bernoulli(q[e]) {
                    let u = net.edge(e).head;
                    if u == t {
                        connected = true;
                        break 'grow;
                    }
                    if !self.reachable[u] {
                        self.reachable[u] = true;
                        self.frontier.push(u);
                    }
                }
            }
        }
        for &v in &self.frontier {
            self.reachable[v] = false;
        }
        self.frontier.clear();
        connected
    }

    fn reveal_from_path(&mut self, rng: &mut RandomStream) {
        let net = self.pre.base();
        let adj = self.pre.out_adjacency();
        let q = net.q();
        self.draws = 0;

        let s = net.s();
        self.reachable[s] = true;
        self.frontier.push(s);
        for &e in &self.path {
            self.revealed[e] = true;
            self.intact[e] = true;
            self.touched.push(e);
            let u = net.edge(e).head;
            self.reachable[u] = true;
            self.frontier.push(u);
        }

        let mut head = 0;
        while head < self.frontier.len() {
            let v = self.frontier[head];
            head += 1;
            for &e in adj.of(v) {
                if self.revealed[e] {
                    continue;
                }
                self.revealed[e] = true;
                self.touched.push(e);
                self.draws += 1;
                if rng.bernoulli(q[e]) {
                    self.intact[e] = true;
                    let u = net.edge(e).head;
                    if !self.reachable[u] {
                        self.reachable[u] = true;
                        self.frontier.push(u);
                    }
                }
            }
        }
    }

    /// Path-count DP restricted to the frontier vertices, in reverse
    /// topological order. Leaves `count`/`saturated` filled for `frontier`.
    fn count_state_paths(&mut self) -> PathCount {
        let pre = self.pre;
        let net = pre.base();
        let t = net.t();
        self.frontier.sort_unstable_by_key(|&v| pre.rank(v));
        for &v in self.frontier.iter().rev() {
            if v == t {
                self.count[v] = 1;
                continue;
            }
            let mut c = 0u64;
            let mut sat = false;
            for &e in pre.out_edges(v) {
                if !self.intact[e] {
                    continue;
                }
                let u = net.edge(e).head;
                sat |= self.saturated[u];
                match c.checked_add(self.count[u]) {
                    Some(x) => c = x,
                    None => sat = true,
                }
            }
            self.count[v] = c;
            self.saturated[v] = sat;
        }
        let s = net.s();
        if self.saturated[s] {
            PathCount::Saturated
        } else {
            PathCount::Exact(self.count[s])
        }
    }

    /// Compares the drawn path with the canonical path of the revealed
    /// state. Requires `count_state_paths` to have run.
    fn path_is_canonical(&self) -> bool {
        let pre = self.pre;
        let net = pre.base();
        let reaches_t = |u: VertexId| self.count[u] > 0 || self.saturated[u];
        let mut v = net.s();
        for &drawn in &self.path {
            let chosen = pre
                .out_edges(v)
                .iter()
                .copied()
                .find(|&e| self.intact[e] && reaches_t(net.edge(e).head));
            if chosen != Some(drawn) {
                return false;
            }
            v = net.edge(drawn).head;
        }
        true
    }

    fn snapshot(&mut self) -> OmegaSample {
        let path_count = self.count_state_paths();
        let mut state = EdgeSubset::empty(self.pre.edge_count());
        for &e in &self.touched {
            if self.intact[e] {
                state.insert(e);
            }
        }
        OmegaSample {
            path: PathSample {
                edges: self.path.clone(),
            },
            state,
            path_count,
        }
    }

    fn reset(&mut self) {
        for &e in &self.touched {
            self.revealed[e] = false;
            self.intact[e] = false;
        }
        self.touched.clear();
        for &v in &self.frontier {
            self.reachable[v] = false;
            self.count[v] = 0;
            self.saturated[v] = false;
        }
        self.frontier.clear();
    }
}

/// Full-state path count used when checking the restricted DP.
#[doc(hidden)]
pub fn state_path_count(pre: &PreparedNetwork, state: &EdgeSubset) -> PathCount {
    match count_paths(pre, state) {
        Ok(c) => PathCount::Exact(c),
        Err(_) => PathCount::Saturated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::prepared::preprocess;
    use crate::network::{Edge, ReliabilityNetwork};
    use std::collections::HashMap;

    #[test]
    fn single_path_is_always_drawn() {
        let pre = preprocess(&fixtures::g2(0.5)).unwrap();
        let mut rng = RandomStream::new(1);
        for _ in 0..100 {
            assert_eq!(sample_path(&pre, &mut rng).edges, vec![0, 1]);
        }
    }

    #[test]
    fn single_path_state_has_one_path() {
        let pre = preprocess(&fixtures::g2(0.5)).unwrap();
        let mut rng = RandomStream::new(2);
        let mut sampler = Sampler::new(&pre);
        for _ in 0..100 {
            let s = sampler.draw_sample(&mut rng);
            assert!(s.path.edges.iter().all(|&e| s.state.contains(e)));
            assert_eq!(s.path_count, PathCount::Exact(1));
        }
    }

    #[test]
    fn forced_off_path_edges_give_two_paths() {
        let pre = preprocess(&fixtures::g3(1.0)).unwrap();
        let path = PathSample { edges: vec![0, 1] };
        let s = extend_to_state(&pre, &path, &mut RandomStream::new(3));
        assert_eq!(s.state, EdgeSubset::full(4));
        assert_eq!(s.path_count, PathCount::Exact(2));
    }

    #[test]
    fn canonical_path_examples() {
        let g3 = preprocess(&fixtures::g3(0.5)).unwrap();
        assert_eq!(canonical_path(&g3, &EdgeSubset::full(4)).unwrap().edges, vec![0, 1]);
        let state = EdgeSubset::from_ids(4, [1, 2, 3]);
        assert_eq!(canonical_path(&g3, &state).unwrap().edges, vec![2, 3]);
        let state = EdgeSubset::from_ids(4, [1, 3]);
        assert_eq!(canonical_path(&g3, &state), Err(Error::NoPath));

        let g4 = preprocess(&fixtures::g4(0.5)).unwrap();
        assert_eq!(canonical_path(&g4, &EdgeSubset::full(5)).unwrap().edges, vec![0, 2, 4]);
    }

    #[test]
    fn canonical_path_skips_dead_ends() {
        // s=0 -> a=1 (id 0) is a dead end once a->t (id 1) fails.
        let g3 = preprocess(&fixtures::g3(0.5)).unwrap();
        let state = EdgeSubset::from_ids(4, [0, 2, 3]);
        assert_eq!(canonical_path(&g3, &state).unwrap().edges, vec![2, 3]);
    }

    #[test]
    fn direct_trial_with_certain_edges() {
        let pre = preprocess(&fixtures::g4(1.0)).unwrap();
        let mut rng = RandomStream::new(4);
        assert!((0..100).all(|_| sample_direct_state(&pre, &mut rng)));
    }

    #[test]
    fn draws_are_deterministic() {
        let pre = preprocess(&fixtures::g4(0.5)).unwrap();
        let run = |seed| {
            let mut rng = RandomStream::new(seed);
            let mut sampler = Sampler::new(&pre);
            (0..50).map(|_| sampler.draw_sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
    }

    #[test]
    fn restricted_count_matches_full_count() {
        let pre = preprocess(&fixtures::diamond_chain(6, 0.7)).unwrap();
        let mut rng = RandomStream::new(5);
        let mut sampler = Sampler::new(&pre);
        for _ in 0..500 {
            let s = sampler.draw_sample(&mut rng);
            assert_eq!(s.path_count, state_path_count(&pre, &s.state));
        }
    }

    #[test]
    fn saturated_counts_are_flagged() {
        let pre = preprocess(&fixtures::diamond_chain(70, 1.0)).unwrap();
        let mut sampler = Sampler::new(&pre);
        let mut rng = RandomStream::new(6);
        assert_eq!(sampler.draw_sample(&mut rng).path_count, PathCount::Saturated);
        assert_eq!(sampler.draw_influence(&mut rng, Influence::Psi), 0.0);
        assert_eq!(sampler.saturations(), 1);
    }

    #[test]
    fn reveal_draws_at_most_m_and_only_from_reachable_tails() {
        // Add an edge into the diamond from a vertex that s reaches only
        // through a failing edge.
        let net = ReliabilityNetwork::new(
            5,
            vec![
                Edge::new(0, 1),
                Edge::new(1, 3),
                Edge::new(0, 2),
                Edge::new(2, 3),
                Edge::new(0, 4),
                Edge::new(4, 2),
            ],
            vec![0.5, 0.5, 0.5, 0.5, 0.0, 0.5],
            0,
            3,
        )
        .unwrap();
        let pre = preprocess(&net).unwrap();
        let mut sampler = Sampler::new(&pre);
        let mut rng = RandomStream::new(8);
        for _ in 0..200 {
            let s = sampler.draw_sample(&mut rng);
            assert!(sampler.last_draw_count() <= pre.edge_count());
            // every revealed intact edge has a tail reachable from s
            for e in s.state.iter() {
                let tail = pre.base().edge(e).tail;
                let reachable = tail == 0
                    || s.state.iter().any(|f| pre.base().edge(f).head == tail);
                assert!(reachable);
            }
        }
    }

    #[test]
    fn path_frequencies_follow_weights() {
        // two disjoint paths with weights 0.25 and 0.125
        let net = ReliabilityNetwork::new(
            4,
            vec![Edge::new(0, 1), Edge::new(1, 3), Edge::new(0, 2), Edge::new(2, 3)],
            vec![0.5, 0.5, 0.25, 0.5],
            0,
            3,
        )
        .unwrap();
        let pre = preprocess(&net).unwrap();
        let mut rng = RandomStream::new(10);
        let draws = 30_000;
        let mut hits: HashMap<Vec<EdgeId>, u64> = HashMap::new();
        for _ in 0..draws {
            *hits.entry(sample_path(&pre, &mut rng).edges).or_default() += 1;
        }
        let expected = [(vec![0, 1], 2.0 / 3.0), (vec![2, 3], 1.0 / 3.0)];
        let chi2: f64 = expected
            .iter()
            .map(|(p, prob)| {
                let e = prob * draws as f64;
                let o = *hits.get(p).unwrap_or(&0) as f64;
                (o - e).powi(2) / e
            })
            .sum();
        // 1 degree of freedom, significance 0.001
        assert!(chi2 < 10.828, "chi2 = {chi2}");
    }
}
