//! Exact finite-temperature entanglement entropy, mutual information and topological
//! entropy of hexagonal color codes in the hard-constrained limit.
//!
//! * [`colex`] builds torus and triangular lattices.
//! * [`bipartition`] turns a region into the counts the closed forms consume.
//! * [`thermo`] evaluates entropies, Renyi traces and limits in closed form.
//! * [`oracle`] recomputes the same quantities by brute force on small lattices.
//! * [`sweep`] and [`verify`] drive both for the command-line tool.

pub mod bipartition;
pub mod colex;
pub mod color;
pub mod error;
pub mod gf2;
pub mod numerics;
pub mod oracle;
pub mod spec;
pub mod sweep;
pub mod thermo;
pub mod verify;

pub use color::{ByColor, Color};
pub use error::{Error, Result};
