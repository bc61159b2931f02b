//! Pairs of non-crossing spanning paths on two-colored point sets.
//!
//! The crate covers exact planar predicates, path validation and crossing
//! counts, a randomized insertion heuristic, an exhaustive solver for small
//! sets, the reduction gadgets that turn Hamiltonian-path questions into
//! disjoint-path questions, and the instance formats and experiment drivers
//! used by the `dpaths` binary.

pub mod bench;
pub mod exact;
pub mod fixtures;
pub mod gadgets;
pub mod generate;
pub mod geometry;
pub mod heuristic;
pub mod io;
pub mod path;
pub mod rng;
pub mod svg;
