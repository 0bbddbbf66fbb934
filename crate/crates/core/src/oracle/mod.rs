//! Oracles built from explicitly chosen roots, for tests and benchmarks.

pub mod cluster_tree;
pub mod generators;
pub mod roots;
pub mod separation_tree;
pub mod stopping;

pub use cluster_tree::{cluster_tree, ClusterNode, ClusterTree};
pub use roots::{Point, RootSet};
pub use separation_tree::{build_separation_tree, SeparationTree};
pub use stopping::{charge_integral, dense_charge, stopping_function, Quadrature};
