//! Partially disjoint k shortest paths.
//!
//! Two routes to a set of s-t paths that do not share too much:
//!
//! * **near-shortest**: enumerate simple paths from best to worst
//!   ([`shortest::PathStream`]) and pick the most different pair
//!   ([`diversity::best_pair`]);
//! * **exactly shortest**: build the subgraph of all shortest paths
//!   ([`spdag::build_spdag`]) and route flow through capacity/cost gadgets
//!   ([`disjoint::solve`]) to bound or minimize sharing of sensitive edges.
//!
//! Weights are exact multi-criteria rationals compared lexicographically.
//! [`generators`] builds the adversarial families and random corpora, and
//! [`oracle`] holds brute-force references for all of the above.

pub mod disjoint;
pub mod diversity;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod par;
pub mod shortest;
pub mod spdag;
pub mod weight;

pub use error::{Error, Result};
pub use graph::{NodeId, Path, WeightedGraph};
pub use weight::WeightVector;
