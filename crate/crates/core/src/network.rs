//! Acyclic reliability networks and the `.dag` text format.
//!
//! A network is a simple directed acyclic graph whose edges are intact
//! independently with probability `q(e)`. Edge ids are the positions in the
//! edge list, which for parsed networks is the order of the `a` records.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Edge { tail, head }
    }
}

/// Directed acyclic network with per-edge intactness probabilities and two
/// terminals. All invariants are checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityNetwork {
    vertex_count: usize,
    edges: Vec<Edge>,
    q: Vec<f64>,
    s: VertexId,
    t: VertexId,
}

impl ReliabilityNetwork {
    pub fn new(
        vertex_count: usize,
        edges: Vec<Edge>,
        q: Vec<f64>,
        s: VertexId,
        t: VertexId,
    ) -> Result<Self> {
        if vertex_count < 2 {
            return Err(Error::InvalidNetwork(format!(
                "need at least 2 vertices, got {vertex_count}"
            )));
        }
        if edges.len() != q.len() {
            return Err(Error::InvalidNetwork(format!(
                "{} edges but {} probabilities",
                edges.len(),
                q.len()
            )));
        }
        if s >= vertex_count || t >= vertex_count {
            return Err(Error::InvalidNetwork(format!(
                "terminal out of range (s={s}, t={t}, n={vertex_count})"
            )));
        }
        if s == t {
            return Err(Error::InvalidNetwork("s and t coincide".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            if e.tail >= vertex_count || e.head >= vertex_count {
                return Err(Error::InvalidNetwork(format!(
                    "edge {id} ({}, {}) has a vertex out of range",
                    e.tail, e.head
                )));
            }
            if e.tail == e.head {
                return Err(Error::InvalidNetwork(format!("edge {id} is a self-loop")));
            }
            if !seen.insert(*e) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate edge ({}, {})",
                    e.tail, e.head
                )));
            }
        }
        for (id, &p) in q.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability { edge: id, value: p });
            }
        }
        let net = ReliabilityNetwork {
            vertex_count,
            edges,
            q,
            s,
            t,
        };
        if net.topological_order().is_none() {
            return Err(Error::NotAcyclic);
        }
        Ok(net)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    /// Intactness probabilities, indexed by edge id.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Failure probability `1 - q(e)`.
    pub fn p(&self, id: EdgeId) -> f64 {
        1.0 - self.q[id]
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn t(&self) -> VertexId {
        self.t
    }

    /// The common intactness probability if every edge carries the same `q`
    /// to within `1e-12`.
    pub fn uniform_q(&self) -> Option<f64> {
        let first = *self.q.first()?;
        self.q
            .iter()
            .all(|&x| (x - first).abs() <= 1e-12)
            .then_some(first)
    }

    /// Kahn's algorithm with ties broken by ascending vertex id. Returns
    /// `None` when the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let n = self.vertex_count;
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for e in &self.edges {
            indeg[e.head] += 1;
            out[e.tail].push(e.head);
        }
        let mut ready: BinaryHeap<Reverse<VertexId>> = (0..n)
            .filter(|&v| indeg[v] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &u in &out[v] {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    ready.push(Reverse(u));
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Parses the `.dag` text format.
    pub fn parse(text: &str) -> Result<Self> {
        parse_dag(text)
    }

    pub fn read_from(mut reader: impl Read) -> Result<Self> {
        let mut text = String::new();
        reader
            .read_to_string(&mut text)
            .map_err(|e| Error::parse(0, format!("read failed: {e}")))?;
        parse_dag(&text)
    }

    /// Serializes to the `.dag` text format. `comments` are emitted as
    /// leading `c` lines.
    pub fn to_dag_string(&self, comments: &[String]) -> String {
        let mut out = String::with_capacity(32 * (self.edges.len() + 4));
        for c in comments {
            let _ = writeln!(out, "c {c}");
        }
        let _ = writeln!(out, "p dag {} {}", self.vertex_count, self.edges.len());
        let _ = writeln!(out, "s {}", self.s);
        let _ = writeln!(out, "t {}", self.t);
        for (e, q) in self.edges.iter().zip(&self.q) {
            let _ = writeln!(out, "a {} {} {}", e.tail, e.head, q);
        }
        out
    }
}

fn parse_dag(text: &str) -> Result<ReliabilityNetwork> {
    let mut header: Option<(usize, usize)> = None;
    let mut s: Option<VertexId> = None;
    let mut t: Option<VertexId> = None;
    let mut edges = Vec::new();
    let mut q = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(kind) = tokens.next() else {
            continue;
        };
        let fields: Vec<&str> = tokens.collect();
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate problem line"));
                }
                if fields.len() != 3 || fields[0] != "dag" {
                    return Err(Error::parse(line_no, "expected `p dag <n> <m>`"));
                }
                let n = parse_int(fields[1], line_no)?;
                let m = parse_int(fields[2], line_no)?;
                header = Some((n, m));
            }
            "s" | "t" => {
                let (n, _) = header.ok_or_else(|| {
                    Error::parse(line_no, "terminal before problem line")
                })?;
                if !edges.is_empty() {
                    return Err(Error::parse(line_no, "terminals must precede arcs"));
                }
                if fields.len() != 1 {
                    return Err(Error::parse(line_no, format!("expected `{kind} <id>`")));
                }
                let v = parse_int(fields[0], line_no)?;
                if v >= n {
                    return Err(Error::parse(line_no, format!("vertex {v} out of range")));
                }
                let slot = if kind == "s" { &mut s } else { &mut t };
                if slot.replace(v).is_some() {
                    return Err(Error::parse(line_no, format!("duplicate `{kind}` line")));
                }
            }
            "a" => {
                let (n, m) = header.ok_or_else(|| {
                    Error::parse(line_no, "arc before problem line")
                })?;
                if s.is_none() || t.is_none() {
                    return Err(Error::parse(line_no, "arc before both terminals"));
                }
                if fields.len() != 3 {
                    return Err(Error::parse(line_no, "expected `a <u> <v> <q>`"));
                }
                if edges.len() == m {
                    return Err(Error::parse(line_no, format!("more than {m} arcs")));
                }
                let u = parse_int(fields[0], line_no)?;
                let v = parse_int(fields[1], line_no)?;
                if u >= n || v >= n {
                    return Err(Error::parse(line_no, "arc vertex out of range"));
                }
                let p: f64 = fields[2]
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad probability `{}`", fields[2])))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidProbability {
                        edge: edges.len(),
                        value: p,
                    });
                }
                edges.push(Edge::new(u, v));
                q.push(p);
            }
            other => {
                return Err(Error::parse(line_no, format!("unknown record `{other}`")));
            }
        }
    }

    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    let (Some(s), Some(t)) = (s, t) else {
        return Err(Error::parse(0, "missing terminal line"));
    };
    if edges.len() != m {
        return Err(Error::parse(0, format!("expected {m} arcs, found {}", edges.len())));
    }
    ReliabilityNetwork::new(n, edges, q, s, t)
}

fn parse_int(token: &str, line: usize) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("bad integer `{token}`")))
}

/// A set of edges of some network, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSubset {
    member: Vec<bool>,
}

impl EdgeSubset {
    pub fn empty(edge_count: usize) -> Self {
        EdgeSubset {
            member: vec![false; edge_count],
        }
    }

    pub fn full(edge_count: usize) -> Self {
        EdgeSubset {
            member: vec![true; edge_count],
        }
    }

    pub fn from_ids(edge_count: usize, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut set = Self::empty(edge_count);
        for id in ids {
            set.insert(id);
        }
        set
    }

    /// Bit `i` of `mask` selects edge `i`.
    pub fn from_mask(edge_count: usize, mask: u64) -> Self {
        EdgeSubset {
            member: (0..edge_count).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.member.len()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.member[id]
    }

    pub fn insert(&mut self, id: EdgeId) {
        self.member[id] = true;
    }

    pub fn remove(&mut self, id: EdgeId) {
        self.member[id] = false;
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn is_subset_of(&self, other: &EdgeSubset) -> bool {
        self.member
            .iter()
            .zip(&other.member)
            .all(|(&a, &b)| !a || b)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.member
    }
}
