//! Walecki's decomposition of K_{2r+1} into r edge-disjoint Hamiltonian
//! cycles.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// `r` edge-disjoint Hamiltonian cycles covering E(K_{2r+1}).
///
/// Cycle 0 is the zig-zag 0, 1, 2r-1, 2, 2r-2, ..., r-1, r+1, r followed by
/// the dummy vertex (identified with 2r); cycle i rotates every non-dummy
/// label by i modulo 2r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianDecomposition {
    r: u32,
    cycles: Vec<Vec<u32>>,
}

pub fn walecki(r: u32) -> Result<HamiltonianDecomposition> {
    if r == 0 {
        return Err(Error::ParamOutOfRange("walecki requires r >= 1".into()));
    }
    let n = 2 * r + 1;
    let mut base = Vec::with_capacity(n as usize);
    base.push(0u32);
    for j in 1..2 * r {
        base.push(if j % 2 == 1 { j.div_ceil(2) } else { 2 * r - j / 2 });
    }
    base.push(2 * r); // the dummy, fixed by rotation

    let cycles = (0..r)
        .map(|i| {
            base.iter()
                .map(|&l| if l == 2 * r { l } else { (l + i) % (2 * r) })
                .collect()
        })
        .collect();
    Ok(HamiltonianDecomposition { r, cycles })
}

impl HamiltonianDecomposition {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn num_vertices(&self) -> u32 {
        2 * self.r + 1
    }

    /// Cyclic vertex sequences, one per cycle.
    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    /// Normalised edge set of cycle `i`.
    pub fn cycle_edges(&self, i: usize) -> Vec<(u32, u32)> {
        let c = &self.cycles[i];
        let mut edges: Vec<(u32, u32)> = (0..c.len())
            .map(|j| {
                let (a, b) = (c[j], c[(j + 1) % c.len()]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    /// True when the cycles are pairwise edge-disjoint Hamiltonian cycles
    /// whose union is all of E(K_{2r+1}).
    pub fn is_valid_decomposition(&self) -> bool {
        let n = self.num_vertices();
        let mut all = BTreeSet::new();
        for (i, c) in self.cycles.iter().enumerate() {
            let mut verts: Vec<u32> = c.clone();
            verts.sort_unstable();
            verts.dedup();
            if verts.len() as u32 != n || verts != (0..n).collect::<Vec<_>>() {
                return false;
            }
            for e in self.cycle_edges(i) {
                if !all.insert(e) {
                    return false; // shared edge
                }
            }
        }
        all.len() as u32 == n * (n - 1) / 2
    }
}
