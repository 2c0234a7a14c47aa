//! Seeded random instance families.

mod del;
mod tc;

pub use del::{delaunay_network, draw_points, farthest_pair, generate_del, DelParams};
pub use tc::{generate_tc, TcParams};
