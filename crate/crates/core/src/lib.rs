//! Exact computation of greedy elements in rank-2 cluster algebras `A(b, c)`.
//!
//! Every coefficient is an arbitrary-precision integer; nothing here uses
//! floating point.

pub mod arith;
pub mod basisops;
pub mod cluster;
pub mod dyck;
pub mod greedy;
pub mod laurent;
pub mod verify;

pub use cluster::SeedParams;
pub use greedy::{Method, PointedElement};
pub use laurent::LaurentPoly;
