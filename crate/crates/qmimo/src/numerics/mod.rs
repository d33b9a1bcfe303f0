//! Complex-matrix linear algebra, deterministic random streams, and
//! numerically stable combinatorics shared by every other module.

pub mod linalg;
pub mod rng;
pub mod special;

pub use linalg::{cgauss_matrix, gram_inverse, CMatrix};
pub use rng::RngStream;
pub use special::{log_binomial, logaddexp, logsumexp};
