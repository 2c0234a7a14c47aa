//! Edge-vertex bounds: the maximum of `|E(U)|/|U|` over vertex subsets,
//! where `E(U)` is the set of edges with both endpoints in `U`.
//!
//! The exact value comes from the classic maximum-density-subgraph cut
//! construction. For a density guess `a/b` the network has arcs
//! `src→v` (capacity `b·m`), `v→snk` (capacity `b·m + 2a − b·deg(v)`) and
//! `u↔v` (capacity `b`) per edge; its minimum cut is `b·m·n` unless some
//! `U` has density above `a/b`, in which case the source side of a minimum
//! cut is such a `U`. The guess is raised to the density of that `U` until
//! no denser subset exists, so the answer is the exact rational realised by
//! the final certifying subset.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use crate::json::JsonObject;
use crate::network::ReliabilityNetwork;

/// Nonnegative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Rational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_json(&self) -> String {
        JsonObject::new()
            .u64("num", self.num)
            .u64("den", self.den)
            .finish()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `Δ_max/2`, with `Δ` counting in- plus out-degree.
pub fn edge_vertex_bound_simple(net: &ReliabilityNetwork) -> Rational {
    let mut deg = vec![0u64; net.vertex_count()];
    for e in net.edges() {
        deg[e.tail] += 1;
        deg[e.head] += 1;
    }
    Rational::new(deg.into_iter().max().unwrap_or(0), 2)
}

/// The smallest valid edge-vertex bound, via minimum cuts.
pub fn edge_vertex_bound_exact(net: &ReliabilityNetwork) -> Rational {
    densest_subgraph(net).0
}

/// Maximum density together with a vertex set attaining it.
pub fn densest_subgraph(net: &ReliabilityNetwork) -> (Rational, Vec<bool>) {
    let n = net.vertex_count();
    let m = net.edge_count();
    let mut best_set = vec![true; n];
    if m == 0 {
        return (Rational::new(0, 1), best_set);
    }
    let mut best = Rational::new(m as u64, n as u64);
    while let Some(set) = denser_subset(net, best) {
        let density = subset_density(net, &set);
        debug_assert!(density > best);
        best = density;
        best_set = set;
    }
    (best, best_set)
}

fn subset_density(net: &ReliabilityNetwork, set: &[bool]) -> Rational {
    let size = set.iter().filter(|&&b| b).count() as u64;
    let inside = net
        .edges()
        .iter()
        .filter(|e| set[e.tail] && set[e.head])
        .count() as u64;
    Rational::new(inside, size)
}

/// A vertex set with density strictly above `guess`, if one exists.
fn denser_subset(net: &ReliabilityNetwork, guess: Rational) -> Option<Vec<bool>> {
    let n = net.vertex_count();
    let m = net.edge_count() as i64;
    let (a, b) = (guess.num as i64, guess.den as i64);
    let src = n;
    let snk = n + 1;
    let mut deg = vec![0i64; n];
    for e in net.edges() {
        deg[e.tail] += 1;
        deg[e.head] += 1;
    }
    let mut flow = Dinic::new(n + 2);
    for v in 0..n {
        flow.add_arc(src, v, b * m);
        flow.add_arc(v, snk, b * m + 2 * a - b * deg[v]);
    }
    for e in net.edges() {
        flow.add_undirected(e.tail, e.head, b);
    }
    let cut = flow.max_flow(src, snk);
    if cut >= b * m * n as i64 {
        return None;
    }
    let side = flow.source_side(src);
    let set: Vec<bool> = side[..n].to_vec();
    set.iter().any(|&x| x).then_some(set)
}

/// Dinic's maximum flow with an iterative blocking-flow search.
struct Dinic {
    adj: Vec<Vec<usize>>,
    head: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<usize>,
    next: Vec<usize>,
}

const UNSEEN: usize = usize::MAX;

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); nodes],
            head: Vec::new(),
            cap: Vec::new(),
            level: vec![UNSEEN; nodes],
            next: vec![0; nodes],
        }
    }

    fn add_pair(&mut self, u: usize, v: usize, forward: i64, backward: i64) {
        self.adj[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(forward);
        self.adj[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(backward);
    }

    fn add_arc(&mut self, u: usize, v: usize, cap: i64) {
        self.add_pair(u, v, cap, 0);
    }

    fn add_undirected(&mut self, u: usize, v: usize, cap: i64) {
        self.add_pair(u, v, cap, cap);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(UNSEEN);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &arc in &self.adj[v] {
                let u = self.head[arc];
                if self.cap[arc] > 0 && self.level[u] == UNSEEN {
                    self.level[u] = self.level[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        self.level[t] != UNSEEN
    }

    fn blocking_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        let mut stack: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let f = stack.iter().map(|&a| self.cap[a]).min().unwrap_or(0);
                for &a in &stack {
                    self.cap[a] -= f;
                    self.cap[a ^ 1] += f;
                }
                total += f;
                let k = stack
                    .iter()
                    .position(|&a| self.cap[a] == 0)
                    .expect("bottleneck arc is saturated");
                v = self.head[stack[k] ^ 1];
                stack.truncate(k);
                continue;
            }
            let mut advanced = false;
            while self.next[v] < self.adj[v].len() {
                let a = self.adj[v][self.next[v]];
                let u = self.head[a];
                if self.cap[a] > 0 && self.level[u] != UNSEEN && self.level[u] == self.level[v] + 1 {
                    stack.push(a);
                    v = u;
                    advanced = true;
                    break;
                }
                self.next[v] += 1;
            }
            if !advanced {
                if v == s {
                    return total;
                }
                self.level[v] = UNSEEN;
                let a = stack.pop().expect("non-source vertex has an entry arc");
                v = self.head[a ^ 1];
                self.next[v] += 1;
            }
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.next.fill(0);
            flow += self.blocking_flow(s, t);
        }
        flow
    }

    /// Vertices reachable from `s` in the residual graph.
    fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &arc in &self.adj[v] {
                let u = self.head[arc];
                if self.cap[arc] > 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}
