//! Empire colouring end-to-end: the reduced-graph model, polynomial-time
//! colouring of sparse instances, the gadget constructions behind the
//! hardness reductions (clique, connectivity and planar gadgets), the
//! CNF-to-empire-graph reduction pipelines for linear forests, trees and
//! planar graphs, and exact solvers used as verification oracles.

pub mod budget;
pub mod cnf;
pub mod colouring;
mod connectivity;
pub mod density;
pub mod eg_io;
pub mod error;
pub mod graph;
pub mod planarity;
pub mod solvers;

pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::{reduce, verify_colouring, Colouring, Empire, EmpireGraph, InfeasibilityWitness, ReducedGraph, Vertex};
pub mod gadgets;
pub mod formula_graph;
pub mod reductions;
