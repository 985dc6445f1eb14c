//! Simulation engine for critical rank-1 inhomogeneous random graphs.
//!
//! Vertices carry integer types `x`, and two vertices of types `x` and `y`
//! are joined independently with probability `min(1, x y (1 + a n^{-1/3}) / n)`.
//! The crate explores such graphs with a type-bucketed breadth-first walk
//! (no edge list), simulates the reflected diffusion that governs the
//! rescaled component sizes, and provides the small-`n` oracles and
//! statistics used to check one against the other.

pub mod dist;
pub mod limit;
pub mod oracle;
pub mod seed;
pub mod stats;
pub mod walk;

pub use dist::{compute_moments, size_biased_pmf, MomentSummary, TypeCounts, TypePmf, TypeValue};
pub use limit::{LimitParams, LimitPath};
pub use seed::SimRng;
pub use walk::{census_from_trace, run_walk, ComponentCensus, WalkState, WalkTrace};
