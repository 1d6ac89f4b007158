//! Gadget constructors for the hardness reductions: Hamiltonian
//! decompositions, clique gadgets B / B+ / B-, the connectivity gadgets
//! E and A with their linearization, and the planar gadgets D built by
//! certified search.
//!
//! Every constructor returns a [`GadgetArtifact`]: the empire graph plus a
//! role map tagging the vertices/empires the reductions wire against
//! (plug/socket/monochromatic set Z, forced pairs u/v, truth labels).

mod cache;
mod clique;
mod connector;
mod planar;
mod walecki;

use std::collections::BTreeMap;

use crate::graph::EmpireGraph;

pub(crate) use clique::b_minus_isolated_vertex;
pub use clique::{build_b, build_b_minus, build_b_plus, canonical_forced_pair};
pub use connector::{
    build_a, build_e, degree_distribution, euler_tour, linearize, linearize_with_budget,
    DegreeCounts, DegreeTable, LinearizeInfo,
};
pub use cache::{build_d_cached, planar_decompose_k_cached};
pub use planar::{build_d, planar_decompose_k, thickness_lower_bound};
pub use walecki::{walecki, HamiltonianDecomposition};

/// Role-tag map: tag -> list of vertex or empire ids (see [`roles`] for which).
pub type RoleMap = BTreeMap<String, Vec<u32>>;

/// An empire graph annotated with role-tagged vertex/empire sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetArtifact {
    pub graph: EmpireGraph,
    pub roles: RoleMap,
}

impl GadgetArtifact {
    pub fn role(&self, tag: &str) -> &[u32] {
        self.roles.get(tag).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Well-known role tags.
///
/// Empire-valued tags: `plug`, `socket`, `colour_constraining`,
/// `internal_group<i>`, `mono`, `root_empire`, `u_empire`, `v_empire`,
/// `T`, `F`, `X<i>`. Vertex-valued tags: `Z` (the isolated monochromatic
/// vertices).
pub mod roles {
    pub const PLUG: &str = "plug";
    pub const SOCKET: &str = "socket";
    pub const COLOUR_CONSTRAINING: &str = "colour_constraining";
    pub const MONO: &str = "mono";
    pub const Z: &str = "Z";
    pub const ROOT_EMPIRE: &str = "root_empire";
    pub const U_EMPIRE: &str = "u_empire";
    pub const V_EMPIRE: &str = "v_empire";
    pub const T: &str = "T";
    pub const F: &str = "F";

    pub fn internal_group(i: u32) -> String {
        format!("internal_group{i}")
    }

    pub fn x(i: u32) -> String {
        format!("X{i}")
    }
}
