//! Small named networks used throughout the tests and documentation.
//!
//! Vertex and edge ids are fixed so that expected values can be stated by
//! hand. `s` is always vertex 0.

use crate::network::{Edge, ReliabilityNetwork};

fn build(n: usize, edges: &[(usize, usize)], q: Vec<f64>, t: usize) -> ReliabilityNetwork {
    let edges = edges.iter().map(|&(u, v)| Edge::new(u, v)).collect();
    ReliabilityNetwork::new(n, edges, q, 0, t).expect("fixture is valid")
}

/// G1: the single edge s→t.
pub fn g1(q: f64) -> ReliabilityNetwork {
    build(2, &[(0, 1)], vec![q], 1)
}

/// G2: the path s→a→t (s=0, a=1, t=2).
pub fn g2(q: f64) -> ReliabilityNetwork {
    g2_with(q, q)
}

pub fn g2_with(q_sa: f64, q_at: f64) -> ReliabilityNetwork {
    build(3, &[(0, 1), (1, 2)], vec![q_sa, q_at], 2)
}

/// G3: the diamond s→a→t, s→b→t (s=0, a=1, b=2, t=3) with edge ids
/// (s,a)=0, (a,t)=1, (s,b)=2, (b,t)=3.
pub fn g3(q: f64) -> ReliabilityNetwork {
    build(4, &[(0, 1), (1, 3), (0, 2), (2, 3)], vec![q; 4], 3)
}

/// G4: s→a, s→b, a→b, a→t, b→t (s=0, a=1, b=2, t=3) with ids in that order.
pub fn g4(q: f64) -> ReliabilityNetwork {
    build(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], vec![q; 5], 3)
}

/// The triangle s→a, a→t, s→t (s=0, a=1, t=2).
pub fn triangle(q: f64) -> ReliabilityNetwork {
    build(3, &[(0, 1), (1, 2), (0, 2)], vec![q; 3], 2)
}

/// `k` diamonds in series; the full state has `2^k` s-t paths.
pub fn diamond_chain(k: usize, q: f64) -> ReliabilityNetwork {
    let mut edges = Vec::with_capacity(4 * k);
    for i in 0..k {
        let v = 3 * i;
        edges.extend([(v, v + 1), (v, v + 2), (v + 1, v + 3), (v + 2, v + 3)]);
    }
    build(3 * k + 1, &edges, vec![q; 4 * k], 3 * k)
}
