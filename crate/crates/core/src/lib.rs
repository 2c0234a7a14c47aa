//! Monte Carlo estimation of two-terminal reliability in directed acyclic
//! networks, with a path-based importance sampler, a-priori bounds on its
//! sample size, an exhaustive oracle and random instance generators.

pub mod bounds;
pub mod density;
pub mod error;
pub mod estimators;
pub mod fixtures;
pub mod generators;
pub mod json;
pub mod network;
pub mod oracle;
pub mod prepared;
pub mod rng;
pub mod sampling;
pub mod stopping;

pub use bounds::{build_bound_report, improved_bound, karp_luby_bound, BoundReport, MuMode};
pub use density::{edge_vertex_bound_exact, edge_vertex_bound_simple, Rational};
pub use error::{Error, Result};
pub use estimators::{
    direct_estimate, estimate_network, path_mc_estimate, Accuracy, EstimateResult, Influence,
    Method, RunOptions, StoppingScheme,
};
pub use network::{Edge, EdgeId, EdgeSubset, ReliabilityNetwork, VertexId};
pub use prepared::{preprocess, PreparedNetwork};
pub use rng::RandomStream;
pub use sampling::{OmegaSample, PathCount, PathSample, Sampler};
pub use generators::{generate_del, generate_tc, DelParams, TcParams};
pub use oracle::{exact_edge_vertex_bound, exact_omega_moments, exact_reliability, OmegaMoments};
