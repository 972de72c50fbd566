//! Graph, instance and solution data model.

pub mod graph;
pub mod instance;
pub mod skeleton;
pub mod solution;
pub mod tree;
