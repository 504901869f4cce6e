//! Syntomic P-cohomology and finite-polynomial cohomology of geometry
//! packages over Q_p, with explicit hyperelliptic curves (Kedlaya's
//! algorithm, Coleman integration) feeding the Abel–Jacobi evaluators.

pub mod coleman;
pub mod curves;
pub mod error;
pub mod fp;
pub mod homological;
pub mod linalg;
pub mod padic;
pub mod phin;
pub mod random;
pub mod syntomic;

pub use error::{Error, Result};
