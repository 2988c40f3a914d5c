//! Exact symbolic computation in twisted group algebras `ℂ[V]#G` of finite
//! symplectic matrix groups, and a decision procedure for whether the Poisson
//! bracket on the invariants `ℂ[V]^G` can extend to the trace space of `ℂ[V]#G`.

pub mod algebra;
pub mod error;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod obstruction;
pub mod scenario;
pub mod selftest;
pub mod skew;

pub use error::{Error, ParseError, Result};
