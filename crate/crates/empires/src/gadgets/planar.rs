//! Planar gadgets built by certified search: partitions of clique edge sets
//! into planar layers, and the D gadget (the planar colour constrainer)
//! whose components each take at most one vertex per empire.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use super::{roles, GadgetArtifact, RoleMap};

/// Edge classes of a planar partition, and the memo keyed by parameters.
type EdgeClasses = Vec<Vec<(u32, u32)>>;
type ClassCache = Mutex<BTreeMap<(u32, u32), EdgeClasses>>;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{Empire, EmpireGraph, Vertex};
use crate::planarity::is_planar;

/// Known thickness lower bound for K_n: ceil((n+2)/6), except 3 for n = 9, 10.
pub fn thickness_lower_bound(n: u32) -> u32 {
    match n {
        0..=2 => 1,
        9 | 10 => 3,
        _ => (n + 2).div_ceil(6),
    }
}

fn decomposition_cache() -> &'static ClassCache {
    static CACHE: OnceLock<ClassCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

fn d_cache() -> &'static ClassCache {
    static CACHE: OnceLock<ClassCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Seeds the in-process memo from externally validated results (disk cache).
pub(crate) fn seed_decomposition_cache(n: u32, layers: u32, classes: EdgeClasses) {
    decomposition_cache().lock().unwrap().insert((n, layers), classes);
}

/// Recovers the canonical class partition from a (0, 1)-labelled D artifact
/// and seeds the memo with it.
pub(crate) fn seed_d_cache_from_canonical(r: u32, s: u32, art: &GadgetArtifact) {
    let g = &art.graph;
    let mut classes = vec![Vec::new(); r as usize];
    for &(x, y) in g.edges() {
        let k = (x % r) as usize;
        debug_assert_eq!(k, (y % r) as usize);
        let (a, b) = (g.empire_of(x), g.empire_of(y));
        classes[k].push((a.min(b), a.max(b)));
    }
    for class in &mut classes {
        class.sort_unstable();
    }
    d_cache().lock().unwrap().insert((r, s), classes);
}

/// Lexicographically least partition of E(K_n) into `layers` planar edge
/// sets (some possibly empty), found by first-fit backtracking with a
/// planarity oracle. Memoized per (n, layers).
pub fn planar_decompose_k(n: u32, layers: u32, budget: &Budget) -> Result<EdgeClasses> {
    if n == 0 || layers == 0 {
        return Err(Error::ParamOutOfRange("need n >= 1 and layers >= 1".into()));
    }
    if layers < thickness_lower_bound(n) {
        return Err(Error::ParamOutOfRange(format!(
            "{layers} planar layers cannot cover K_{n} (thickness >= {})",
            thickness_lower_bound(n)
        )));
    }
    if let Some(hit) = decomposition_cache().lock().unwrap().get(&(n, layers)) {
        return Ok(hit.clone());
    }
    let edges: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let classes = partition_into_planar(n, &edges, layers, None, budget)?;
    decomposition_cache().lock().unwrap().insert((n, layers), classes.clone());
    Ok(classes)
}

/// Backtracking edge-to-class assignment. Classes other than a possibly
/// constrained class 0 are interchangeable, so an edge may only open the
/// next unused class. `forbidden_in_first` excludes edges touching that
/// vertex from class 0.
fn partition_into_planar(
    n: u32,
    edges: &[(u32, u32)],
    layers: u32,
    forbidden_in_first: Option<u32>,
    budget: &Budget,
) -> Result<EdgeClasses> {
    let mut meter = budget.start();
    let mut classes: Vec<Vec<(u32, u32)>> = vec![Vec::new(); layers as usize];
    let cap = if n >= 3 { (3 * n - 6) as usize } else { edges.len() };

    struct Ctx<'a> {
        edges: &'a [(u32, u32)],
        n: u32,
        forbidden_in_first: Option<u32>,
        cap: usize,
    }

    // highest_sym_used: highest class index >= 1 in use, 0 if none.
    fn rec(
        ctx: &Ctx,
        idx: usize,
        classes: &mut Vec<Vec<(u32, u32)>>,
        highest_sym_used: u32,
        meter: &mut crate::budget::Meter,
    ) -> Option<bool> {
        if idx == ctx.edges.len() {
            return Some(true);
        }
        if !meter.tick() {
            return None;
        }
        let (a, b) = ctx.edges[idx];
        let layers = classes.len() as u32;
        let max_class = layers.min(highest_sym_used + 2);
        for c in 0..max_class {
            if c == 0 {
                if let Some(f) = ctx.forbidden_in_first {
                    if a == f || b == f {
                        continue;
                    }
                }
            }
            let class = &mut classes[c as usize];
            if class.len() >= ctx.cap {
                continue;
            }
            class.push((a, b));
            let ok = is_planar(ctx.n, &classes[c as usize]);
            if ok {
                let next_high = if c >= 1 { highest_sym_used.max(c) } else { highest_sym_used };
                match rec(ctx, idx + 1, classes, next_high, meter) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => {
                        classes[c as usize].pop();
                        return None;
                    }
                }
            }
            classes[c as usize].pop();
        }
        Some(false)
    }

    let ctx = Ctx { edges, n, forbidden_in_first, cap };
    match rec(&ctx, 0, &mut classes, 0, &mut meter) {
        Some(true) => Ok(classes),
        Some(false) => Err(Error::SearchFailed(format!(
            "no partition of {} edges into {layers} planar layers",
            edges.len()
        ))),
        None => Err(Error::Timeout(format!(
            "planar partition search exceeded its budget after {} nodes",
            meter.nodes
        ))),
    }
}

/// The planar colour constraining gadget D_{r,s}(u, v): r(s+1) vertices in
/// s+1 empires, component k carrying vertex k of each empire, the classes
/// partitioning E(K_{s+1} - {u,v}) with every class planar, v's first vertex
/// isolated. Any (s, r)-colouring gives u and v the same colour.
pub fn build_d(r: u32, s: u32, u: Empire, v: Empire, budget: &Budget) -> Result<GadgetArtifact> {
    if r < 2 {
        return Err(Error::ParamOutOfRange("build_d needs r >= 2".into()));
    }
    let bound = 6 * r - 3 - if r == 2 { 2 } else { 0 };
    if s < 2 || s >= bound {
        return Err(Error::ParamOutOfRange(format!(
            "build_d needs 2 <= s < {bound} for r = {r}, got s = {s}"
        )));
    }
    if u == v || u > s || v > s {
        return Err(Error::ParamOutOfRange(format!("bad empire pair ({u},{v}) for s = {s}")));
    }

    // Search once per (r, s) for the canonical pair (0, 1), then relabel.
    let classes = {
        let cache = d_cache().lock().unwrap().get(&(r, s)).cloned();
        match cache {
            Some(hit) => hit,
            None => {
                let edges: Vec<(u32, u32)> = (0..=s)
                    .flat_map(|a| (a + 1..=s).map(move |b| (a, b)))
                    .filter(|&e| e != (0, 1))
                    .collect();
                let classes = partition_into_planar(s + 1, &edges, r, Some(1), budget)?;
                d_cache().lock().unwrap().insert((r, s), classes.clone());
                classes
            }
        }
    };

    // Relabel empires so canonical (0, 1) becomes (u, v).
    let mut perm: Vec<Empire> = (0..=s).collect();
    perm.swap(0, u as usize);
    let pos_of_1 = perm.iter().position(|&e| e == 1).unwrap();
    perm.swap(pos_of_1, v as usize);
    let mut relabel = vec![0 as Empire; (s + 1) as usize];
    for (slot, &orig) in perm.iter().enumerate() {
        relabel[orig as usize] = slot as Empire;
    }

    // Vertex id = empire * r + component index.
    let empire_of: Vec<Empire> = (0..(s + 1) * r).map(|x| x / r).collect();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for (k, class) in classes.iter().enumerate() {
        for &(a, b) in class {
            let (ra, rb) = (relabel[a as usize], relabel[b as usize]);
            edges.push((ra * r + k as u32, rb * r + k as u32));
        }
    }
    let graph = EmpireGraph::new_strict(r, empire_of, edges)?;
    let mut role_map = RoleMap::new();
    role_map.insert(roles::U_EMPIRE.into(), vec![u]);
    role_map.insert(roles::V_EMPIRE.into(), vec![v]);
    let art = GadgetArtifact { graph, roles: role_map };
    debug_assert!(d_conditions_hold(&art, r, s, u, v));
    Ok(art)
}

/// D0-D3 plus per-component planarity; used by tests and debug assertions.
pub(crate) fn d_conditions_hold(art: &GadgetArtifact, r: u32, s: u32, u: Empire, v: Empire) -> bool {
    let g = &art.graph;
    // D0
    if g.num_vertices() != r * (s + 1) || g.num_empires() != s + 1 || !g.is_strict() {
        return false;
    }
    // D1: v's first vertex isolated.
    let v1 = v * r;
    if g.edges().iter().any(|&(a, b)| a == v1 || b == v1) {
        return false;
    }
    // D2: no component repeats an empire; also per-component planarity.
    let adj = g.adjacency();
    for comp in crate::connectivity::components(g.num_vertices() as usize, &adj) {
        let mut empires: Vec<Empire> = comp.iter().map(|&x| g.empire_of(x)).collect();
        let len = empires.len();
        empires.sort_unstable();
        empires.dedup();
        if empires.len() != len {
            return false;
        }
    }
    let comp_edges: Vec<(u32, u32)> = g.edges().to_vec();
    if !is_planar(g.num_vertices(), &comp_edges) {
        return false;
    }
    // D3: reduced graph is exactly K_{s+1} minus {u, v}.
    let rg = crate::graph::reduce(g);
    for a in 0..=s {
        for b in a + 1..=s {
            let expect = (a, b) != (u.min(v), u.max(v));
            if rg.are_adjacent(a, b) != expect {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::reduce;
    use crate::solvers::enumerate_colourings;

    #[test]
    fn decompose_small_cliques() {
        let b = Budget::default();
        let one = planar_decompose_k(4, 1, &b).unwrap();
        assert_eq!(one[0].len(), 6); // all of K_4

        let two = planar_decompose_k(6, 2, &b).unwrap();
        assert_eq!(two.iter().map(|c| c.len()).sum::<usize>(), 15);
        assert!(two.iter().all(|c| is_planar(6, c)));

        let k8 = planar_decompose_k(8, 2, &b).unwrap();
        assert_eq!(k8.iter().map(|c| c.len()).sum::<usize>(), 28);
        assert!(k8.iter().all(|c| is_planar(8, c)));

        assert!(planar_decompose_k(6, 1, &b).is_err()); // K_6 is not planar
    }

    #[test]
    fn decomposition_is_a_partition() {
        let b = Budget::default();
        for (n, layers) in [(5u32, 2u32), (7, 2), (8, 2), (9, 3)] {
            let classes = planar_decompose_k(n, layers, &b).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for class in &classes {
                for &e in class {
                    assert!(seen.insert(e), "duplicate edge {e:?}");
                }
            }
            assert_eq!(seen.len() as u32, n * (n - 1) / 2, "n={n}");
        }
    }

    #[test]
    fn d26_shape() {
        let b = Budget::default();
        let art = build_d(2, 6, 0, 1, &b).unwrap();
        assert_eq!(art.graph.num_vertices(), 14);
        assert_eq!(art.graph.num_empires(), 7);
        assert!(d_conditions_hold(&art, 2, 6, 0, 1));
        let rg = reduce(&art.graph);
        assert!(!rg.are_adjacent(0, 1));
        assert_eq!(rg.num_adjacent_pairs(), 7 * 6 / 2 - 1);
    }

    #[test]
    fn d25_forces_u_equals_v() {
        let b = Budget::default();
        let art = build_d(2, 5, 0, 1, &b).unwrap();
        let rg = reduce(&art.graph);
        let all = enumerate_colourings(&rg, 5, None).unwrap();
        assert!(!all.is_empty());
        assert!(all.iter().all(|c| c.colour_of(0) == c.colour_of(1)));
    }

    #[test]
    fn d_sweep_r2_and_r3() {
        let b = Budget::default();
        for s in 2..=6u32 {
            let art = build_d(2, s, 1, s, &b).unwrap();
            assert!(d_conditions_hold(&art, 2, s, 1, s), "r=2 s={s}");
        }
        for s in 2..=8u32 {
            let art = build_d(3, s, 0, 2, &b).unwrap();
            assert!(d_conditions_hold(&art, 3, s, 0, 2), "r=3 s={s}");
        }
        assert!(build_d(2, 7, 0, 1, &b).is_err()); // s < 6r - 3 - 2 delta
    }

    /// Deletion rule: removing any empire other than u, v from
    /// D_{r,s+1} yields a D_{r,s}. Checked against the direct search output.
    #[test]
    fn empire_deletion_rule_preserves_conditions() {
        let b = Budget::default();
        let art = build_d(2, 6, 0, 1, &b).unwrap();
        let g = &art.graph;
        // Delete empire 6 (neither u = 0 nor v = 1).
        let keep: Vec<u32> = (0..g.num_vertices()).filter(|&x| g.empire_of(x) != 6).collect();
        let remap: std::collections::BTreeMap<u32, u32> =
            keep.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        let empire_of: Vec<u32> = keep.iter().map(|&x| g.empire_of(x)).collect();
        let edges: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .filter(|&&(a, b)| remap.contains_key(&a) && remap.contains_key(&b))
            .map(|&(a, b)| (remap[&a], remap[&b]))
            .collect();
        let derived = EmpireGraph::new_strict(2, empire_of, edges).unwrap();
        let derived_art = GadgetArtifact { graph: derived, roles: art.roles.clone() };
        assert!(d_conditions_hold(&derived_art, 2, 5, 0, 1));
    }
}
