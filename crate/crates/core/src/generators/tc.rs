//! Random DAGs with a Hamiltonian chain and sparse long-range edges.
//!
//! Vertices `v_1..v_n` are ids `0..n−1`, `s = 0`, `t = n−1`. Every chain
//! edge `(i, i+1)` is present; each other forward pair is present with
//! probability `λ`, tuned so the expected total degree is `d`. Edge
//! `(i, j)` gets `q ~ U[0, (j−i)^(α−1)]`.

use crate::error::{Error, Result};
use crate::network::{Edge, ReliabilityNetwork};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcParams {
    pub n: usize,
    pub alpha: f64,
    pub target_degree: f64,
    pub seed: u64,
}

impl TcParams {
    /// `(n·d/2 − (n−1)) / (n(n−1)/2 − (n−1))`, or 0 when there are no
    /// optional pairs (`n = 2`).
    pub fn lambda(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.target_degree > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need a positive degree and finite alpha, got {} and {}",
                self.target_degree, self.alpha
            )));
        }
        let n = self.n as f64;
        let optional = n * (n - 1.0) / 2.0 - (n - 1.0);
        if optional == 0.0 {
            return Ok(0.0);
        }
        let lambda = (n * self.target_degree / 2.0 - (n - 1.0)) / optional;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "degree {} gives λ = {lambda} outside [0,1] for n = {}",
                self.target_degree, self.n
            )));
        }
        Ok(lambda)
    }

    pub fn describe(&self) -> Vec<String> {
        vec![
            "generator tc".to_string(),
            format!(
                "n {} alpha {} degree {} seed {}",
                self.n, self.alpha, self.target_degree, self.seed
            ),
        ]
    }
}

pub fn generate_tc(params: &TcParams) -> Result<ReliabilityNetwork> {
    let lambda = params.lambda()?;
    let n = params.n;
    let mut rng = RandomStream::new(params.seed);

    let mut edges: Vec<Edge> = Vec::with_capacity(n + (lambda * n as f64 * n as f64 / 2.0) as usize);
    let mut chosen = optional_pairs(n, lambda, &mut rng).into_iter().peekable();
    for i in 0..n - 1 {
        edges.push(Edge::new(i, i + 1));
        while let Some(&(_, j)) = chosen.peek().filter(|&&(a, _)| a == i) {
            edges.push(Edge::new(i, j));
            chosen.next();
        }
    }

    let q: Vec<f64> = edges
        .iter()
        .map(|e| rng.uniform() * ((e.head - e.tail) as f64).powf(params.alpha - 1.0))
        .collect();
    ReliabilityNetwork::new(n, edges, q, 0, n - 1)
}

/// Pairs `(i, j)`, `j ≥ i+2`, each kept with probability `λ`, in `(i, j)`
/// order. Gaps between kept pairs are drawn geometrically.
fn optional_pairs(n: usize, lambda: f64, rng: &mut RandomStream) -> Vec<(usize, usize)> {
    let row_len = |i: usize| n.saturating_sub(i + 2);
    let mut pairs = Vec::new();
    if lambda <= 0.0 {
        return pairs;
    }
    let log_miss = (1.0 - lambda).ln();
    let (mut i, mut offset) = (0usize, 0u64);
    loop {
        let skip = if lambda >= 1.0 {
            0
        } else {
            // 1 − U lies in (0, 1]
            let gap = ((1.0 - rng.uniform()).ln() / log_miss).floor();
            if gap >= u64::MAX as f64 {
                return pairs;
            }
            gap as u64
        };
        offset += skip;
        while i < n && offset >= row_len(i) as u64 {
            offset -= row_len(i) as u64;
            i += 1;
        }
        if i >= n {
            return pairs;
        }
        pairs.push((i, i + 2 + offset as usize));
        offset += 1;
    }
}
