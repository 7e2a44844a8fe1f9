//! Exact solvers for the upgrading maximal covering location problem.
//!
//! A network has weighted nodes and edges with a length `l`, an upgrade
//! bound `u < l` and a unit cost `c`. Spending `c * delta` on an edge
//! shortens it by `delta <= u`. Given a radius `R`, a budget `B` and a
//! facility count `p`, the goal is to place `p` facilities and an upgrade
//! plan so that the total weight of nodes within distance `R` of some
//! facility is as large as possible.
//!
//! Specialised solvers cover stars with uniform weights ([`star`]), paths
//! with one facility ([`path`]) and integer trees with one facility
//! ([`tree`]). [`oracle`] is an exhaustive reference solver for small
//! instances and [`reductions`] holds the knapsack gadgets.

pub mod error;
pub mod generate;
pub mod io;
pub mod model;
pub mod oracle;
pub mod path;
pub mod reductions;
pub mod star;
pub mod tree;

pub use error::{Error, Result};
pub use model::{
    coverage, normalize, shortest_distances, validate, Coverage, Edge, Instance, NodeId, Solution,
    UpgradePlan,
};
