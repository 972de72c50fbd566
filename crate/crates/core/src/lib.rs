//! Minimum-length rooted edge-capacitated Steiner trees.
//!
//! An [`Instance`] is a graph (directed, acyclic or undirected) with a root,
//! a set of terminals and, on every edge, an exact rational length and a
//! positive integer capacity. A solution is a tree rooted at the root that
//! spans every terminal such that each arc carries at most its capacity in
//! terminals below it.
//!
//! The crate ships exact solvers for the tractable cases, approximation
//! algorithms for the large-capacity regimes, exhaustive oracles for small
//! instances and instance generators built from hardness gadgets.

pub mod classify;
pub mod cli;
pub mod dispatch;
pub mod disjoint_paths;
pub mod error;
pub mod fixed_k;
pub mod flow;
pub mod io;
pub mod large_cap;
pub mod model;
pub mod oracle;
pub mod reductions;
pub mod skeletons;
pub mod steiner;
pub mod suite;

pub use error::{Error, Result};
pub use model::graph::{Arc, ArcGraph};
pub use model::instance::{Edge, GraphKind, Instance, Length};
pub use model::skeleton::{extract_skeleton, skeleton_bounds, Skeleton};
pub use model::solution::{
    check_feasible_tree, FeasibilityReport, SteinerSolution, Violation, ViolationKind,
};
