#![allow(dead_code)]

use dagrel_core::network::Edge;
use dagrel_core::{fixtures, generate_tc, RandomStream, ReliabilityNetwork, TcParams};

pub fn fixtures_at(q: f64) -> Vec<(String, ReliabilityNetwork)> {
    vec![
        ("G1".into(), fixtures::g1(q)),
        ("G2".into(), fixtures::g2(q)),
        ("G3".into(), fixtures::g3(q)),
        ("G4".into(), fixtures::g4(q)),
    ]
}

/// Small TC instances (3 ≤ n ≤ 8, m ≤ 20) with random degree and alpha.
pub fn small_tc(count: usize, seed: u64) -> Vec<(String, ReliabilityNetwork)> {
    let mut rng = RandomStream::new(seed);
    let mut out = Vec::new();
    let mut k = 0u64;
    while out.len() < count {
        k += 1;
        let n = 3 + (rng.uniform() * 6.0) as usize;
        let max_degree = (n - 1) as f64;
        let min_degree = 2.0 * (n - 1) as f64 / n as f64;
        let degree = min_degree + rng.uniform() * (max_degree - min_degree);
        let alpha = rng.uniform();
        let params = TcParams { n, alpha, target_degree: degree, seed: seed * 1000 + k };
        let net = generate_tc(&params).expect("λ in range");
        if net.edge_count() <= 20 && net.q().iter().all(|&q| q > 0.0) {
            out.push((format!("tc-{k}-n{n}"), net));
        }
    }
    out
}

pub fn with_uniform_q(net: &ReliabilityNetwork, q: f64) -> ReliabilityNetwork {
    ReliabilityNetwork::new(
        net.vertex_count(),
        net.edges().to_vec(),
        vec![q; net.edge_count()],
        net.s(),
        net.t(),
    )
    .unwrap()
}

/// Random DAG on `n` vertices with forward edges kept independently.
pub fn random_dag(n: usize, p: f64, rng: &mut RandomStream) -> ReliabilityNetwork {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.bernoulli(p) {
                edges.push(Edge::new(i, j));
            }
        }
    }
    let m = edges.len();
    ReliabilityNetwork::new(n, edges, vec![0.5; m], 0, n - 1).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            for &k in &idx[i..=j] {
                r[k] = (i + j) as f64 / 2.0;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
