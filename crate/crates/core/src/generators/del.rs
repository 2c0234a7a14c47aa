//! Oriented Delaunay triangulations of random points in the unit square.

use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::error::{Error, Result};
use crate::network::{Edge, ReliabilityNetwork};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelParams {
    pub n: usize,
    pub q_bar: f64,
    pub seed: u64,
}

impl DelParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {}", self.n)));
        }
        if !(0.0..=1.0).contains(&self.q_bar) {
            return Err(Error::InvalidParameter(format!(
                "q must lie in [0,1], got {}",
                self.q_bar
            )));
        }
        Ok(())
    }

    /// Header comment lines for the graph file.
    pub fn describe(&self) -> Vec<String> {
        vec![
            "generator del".to_string(),
            format!("n {} q {} seed {}", self.n, self.q_bar, self.seed),
        ]
    }
}

/// `n` points, `x` then `y` per point, from the seed's base stream.
pub fn draw_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = RandomStream::new(seed);
    (0..n)
        .map(|_| {
            let x = rng.uniform();
            let y = rng.uniform();
            (x, y)
        })
        .collect()
}

pub fn generate_del(params: &DelParams) -> Result<ReliabilityNetwork> {
    params.validate()?;
    delaunay_network(&draw_points(params.n, params.seed), params.q_bar)
}

/// Builds the oriented triangulation of `points`; vertex `i` is point `i`.
pub fn delaunay_network(points: &[(f64, f64)], q: f64) -> Result<ReliabilityNetwork> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    let (s, t) = farthest_pair(points);
    let order_key = projection_order(points, s, t);
    let undirected = if n == 2 {
        vec![(0, 1)]
    } else {
        triangulate(points)?
    };
    let mut edges: Vec<Edge> = undirected
        .into_iter()
        .map(|(a, b)| {
            if order_key(a) < order_key(b) {
                Edge::new(a, b)
            } else {
                Edge::new(b, a)
            }
        })
        .collect();
    edges.sort_by_key(|e| (e.tail, e.head));
    let m = edges.len();
    ReliabilityNetwork::new(n, edges, vec![q; m], s, t)
}

/// Undirected Delaunay edges as point-index pairs.
fn triangulate(points: &[(f64, f64)]) -> Result<Vec<(usize, usize)>> {
    let mut tri: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        let handle = tri
            .insert(spade::mitigate_underflow(Point2::new(x, y)))
            .map_err(|e| Error::InvalidParameter(format!("point {i}: {e:?}")))?;
        if handle.index() != i {
            return Err(Error::InvalidParameter(format!(
                "point {i} duplicates point {}",
                handle.index()
            )));
        }
    }
    Ok(tri
        .undirected_edges()
        .map(|e| {
            let [a, b] = e.vertices();
            (a.fix().index(), b.fix().index())
        })
        .collect())
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

/// Lexicographically smallest index pair `(s, t)`, `s < t`, at maximum
/// distance. Only convex hull vertices can attain it.
pub fn farthest_pair(points: &[(f64, f64)]) -> (usize, usize) {
    let hull = hull_vertices(points);
    let mut best = (0, 1);
    let mut best_d = f64::NEG_INFINITY;
    for (k, &a) in hull.iter().enumerate() {
        for &b in &hull[k + 1..] {
            let d = dist2(points[a], points[b]);
            if d > best_d || (d == best_d && (a, b) < best) {
                best = (a, b);
                best_d = d;
            }
        }
    }
    best
}

/// Indices on the convex hull boundary, collinear ones included, sorted.
fn hull_vertices(points: &[(f64, f64)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap().then(a.cmp(&b)));
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (points[o], points[a], points[b]);
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let chain = |iter: &mut dyn Iterator<Item = usize>| {
        let mut h: Vec<usize> = Vec::new();
        for p in iter {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) < 0.0 {
                h.pop();
            }
            h.push(p);
        }
        h
    };
    let mut all = chain(&mut idx.iter().copied());
    all.extend(chain(&mut idx.iter().rev().copied()));
    all.sort_unstable();
    all.dedup();
    all
}

/// Strict total order on vertices along `t − s`, ties by index.
fn projection_order(
    points: &[(f64, f64)],
    s: usize,
    t: usize,
) -> impl Fn(usize) -> (f64, usize) + '_ {
    let (ps, pt) = (points[s], points[t]);
    let dir = (pt.0 - ps.0, pt.1 - ps.1);
    move |v| {
        let p = points[v];
        ((p.0 - ps.0) * dir.0 + (p.1 - ps.1) * dir.1, v)
    }
}
