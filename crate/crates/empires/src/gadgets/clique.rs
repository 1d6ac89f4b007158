//! Clique gadgets: B (a forest of r paths whose reduced graph contains
//! K_{s+1}), the tree-shaped B+ rooted at one empire, and the colour
//! constraining B- that forces two empires to share a colour.

use super::walecki::walecki;
use super::{roles, GadgetArtifact, RoleMap};
use crate::error::{Error, Result};
use crate::graph::{reduce, Empire, EmpireGraph};

/// Row label sequences of B_{r,s}: r paths over empire labels 1..=s+1.
///
/// For s = 2r-1 each row is a Walecki cycle with vertex 0 cut out; smaller s
/// iteratively deletes the top empire and splices each deleted vertex's two
/// neighbours together.
fn b_rows(r: u32, s: u32) -> Result<Vec<Vec<u32>>> {
    if s < 1 || s >= 2 * r {
        return Err(Error::ParamOutOfRange(format!("build_b needs 1 <= s < 2r, got r={r} s={s}")));
    }
    let d = walecki(r)?;
    let mut rows = Vec::with_capacity(r as usize);
    for c in d.cycles() {
        let zero = c.iter().position(|&l| l == 0).expect("0 on every cycle");
        // Cut the cycle at 0: successors of 0 in cyclic order.
        let mut row: Vec<u32> = (1..c.len()).map(|j| c[(zero + j) % c.len()]).collect();
        row.retain(|&l| l <= s + 1);
        rows.push(row);
    }
    Ok(rows)
}

fn graph_from_rows(r: u32, s: u32, rows: &[Vec<u32>], skip: Option<(usize, usize)>) -> Result<EmpireGraph> {
    let cols = (s + 1) as usize;
    let mut empire_of = vec![0 as Empire; (r as usize) * cols];
    let mut edges = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        debug_assert_eq!(row.len(), cols);
        for (p, &label) in row.iter().enumerate() {
            empire_of[i * cols + p] = label - 1;
        }
        for p in 0..cols - 1 {
            if skip == Some((i, p)) {
                continue;
            }
            edges.push(((i * cols + p) as u32, (i * cols + p + 1) as u32));
        }
    }
    EmpireGraph::new_strict(r, empire_of, edges)
}

/// The clique gadget B_{r,s}: r(s+1) vertices in s+1 empires of size r,
/// a forest of r paths, no path touching an empire twice, and K_{s+1}
/// inside its reduced graph.
pub fn build_b(r: u32, s: u32) -> Result<GadgetArtifact> {
    let rows = b_rows(r, s)?;
    let graph = graph_from_rows(r, s, &rows, None)?;
    Ok(GadgetArtifact { graph, roles: RoleMap::new() })
}

/// B_{r,s} plus the path through the root empire's vertices, one per row:
/// connected, acyclic, still reducing onto K_{s+1}.
pub fn build_b_plus(r: u32, s: u32, root: Empire) -> Result<GadgetArtifact> {
    if r < 2 {
        return Err(Error::ParamOutOfRange("build_b_plus needs r > 1".into()));
    }
    if root > s {
        return Err(Error::ParamOutOfRange(format!("root empire {root} out of 0..={s}")));
    }
    let rows = b_rows(r, s)?;
    let mut art = GadgetArtifact {
        graph: graph_from_rows(r, s, &rows, None)?,
        roles: RoleMap::new(),
    };
    let cols = (s + 1) as usize;
    let mut edges: Vec<(u32, u32)> = art.graph.edges().to_vec();
    // Root vertices in row order; each row holds exactly one.
    let anchors: Vec<u32> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = row.iter().position(|&l| l == root + 1).expect("every row meets every empire");
            (i * cols + p) as u32
        })
        .collect();
    for w in anchors.windows(2) {
        edges.push((w[0], w[1]));
    }
    art.graph = EmpireGraph::new_strict(r, art.graph.empire_map().to_vec(), edges)?;
    art.roles.insert(roles::ROOT_EMPIRE.into(), vec![root]);
    Ok(art)
}

/// Path-end pairs of B_{r,s} usable by [`build_b_minus`]: the end empire of
/// a row together with its neighbour, restricted to pairs whose reduced
/// adjacency has multiplicity one (so deleting the edge really disconnects
/// the two empires). Ordered row by row, front end before back end.
fn forced_pair_candidates(r: u32, s: u32) -> Result<Vec<(Empire, Empire, usize, usize)>> {
    let rows = b_rows(r, s)?;
    let base = build_b(r, s)?;
    let rg = reduce(&base.graph);
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let cols = row.len();
        let ends = [(0usize, 1usize), (cols - 1, cols - 2)];
        for (end, next) in ends {
            let (u, v) = (row[end] - 1, row[next] - 1);
            if rg.multiplicity(u, v) == 1 {
                out.push((u, v, i, end.min(next)));
            }
        }
    }
    Ok(out)
}

/// First valid (u, v) pair for B-_{r,s}, for callers that only need some
/// forced pair.
pub fn canonical_forced_pair(r: u32, s: u32) -> Result<(Empire, Empire)> {
    forced_pair_candidates(r, s)?
        .first()
        .map(|&(u, v, _, _)| (u, v))
        .ok_or_else(|| Error::SearchFailed(format!("no forced pair exists in B_{{{r},{s}}}")))
}

/// The colour constraining gadget B-_{r,s}(u, v): B_{r,s} with the single
/// path-end edge between empires u and v removed. u's end vertex becomes
/// isolated and every valid (s, r)-colouring gives u and v one colour.
pub fn build_b_minus(r: u32, s: u32, u: Empire, v: Empire) -> Result<GadgetArtifact> {
    if u == v {
        return Err(Error::ParamOutOfRange("u and v must differ".into()));
    }
    let candidate = forced_pair_candidates(r, s)?
        .into_iter()
        .find(|&(cu, cv, _, _)| cu == u && cv == v);
    let Some((_, _, row, pos)) = candidate else {
        return Err(Error::ParamOutOfRange(format!(
            "empires {u} and {v} are not uniquely adjacent at a path end of B_{{{r},{s}}}"
        )));
    };
    let rows = b_rows(r, s)?;
    let graph = graph_from_rows(r, s, &rows, Some((row, pos)))?;
    let mut roles_map = RoleMap::new();
    roles_map.insert(roles::U_EMPIRE.into(), vec![u]);
    roles_map.insert(roles::V_EMPIRE.into(), vec![v]);
    Ok(GadgetArtifact { graph, roles: roles_map })
}

/// The isolated vertex of empire u in a B- artifact.
pub(crate) fn b_minus_isolated_vertex(art: &GadgetArtifact) -> u32 {
    let u = art.role(roles::U_EMPIRE)[0];
    let adj = art.graph.adjacency();
    art.graph
        .empire_vertices(u)
        .into_iter()
        .find(|&x| adj[x as usize].is_empty())
        .expect("B- has an isolated u vertex")
}
