//! Exact engine for knots encoded as clasp diagrams: the diagram calculus and
//! its local moves, pure-braid conversion, the Alexander/Conway polynomial,
//! and finite-type (Vassiliev) invariants.

pub mod alexander;
pub mod braid;
pub mod diagram;
pub mod error;
pub mod laurent;
pub mod moves;

pub use error::{Error, Result};
