//! Planarity testing via block decomposition and Demoucron-Malgrange-
//! Pertuiset face embedding.
//!
//! A graph is planar iff all its biconnected blocks are, and the gadget
//! blocks this library produces are small, so the quadratic DMP routine is a
//! good fit: embed a cycle, then repeatedly route a path of some fragment
//! through an admissible face, declaring non-planarity when a fragment has
//! no admissible face left.

use std::collections::BTreeSet;

use crate::connectivity::{adjacency, biconnected, block_vertices};

/// Planarity of a simple graph given as a normalised edge list.
pub fn is_planar(n: u32, edges: &[(u32, u32)]) -> bool {
    let mut norm: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    norm.sort_unstable();
    norm.dedup();
    let adj = adjacency(n as usize, &norm);
    let blocks = biconnected(n as usize, &adj);
    blocks.blocks.iter().all(|b| block_is_planar(b))
}

fn block_is_planar(block: &[(u32, u32)]) -> bool {
    let verts = block_vertices(block);
    let n = verts.len();
    if n <= 4 {
        return true;
    }
    if block.len() > 3 * n - 6 {
        return false;
    }
    // Relabel densely.
    let index = |v: u32| verts.binary_search(&v).unwrap() as u32;
    let edges: Vec<(u32, u32)> = block.iter().map(|&(a, b)| (index(a), index(b))).collect();
    dmp(n as u32, &edges)
}

/// DMP on a biconnected simple graph with at least 5 vertices.
fn dmp(n: u32, edges: &[(u32, u32)]) -> bool {
    let adj = adjacency(n as usize, edges);
    let all_edges: BTreeSet<(u32, u32)> = edges.iter().copied().collect();

    let cycle = find_cycle(&adj);
    let mut embedded: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut in_h = vec![false; n as usize];
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        embedded.insert((a.min(b), a.max(b)));
        in_h[a as usize] = true;
    }
    let mut faces: Vec<Vec<u32>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];

    while embedded.len() < all_edges.len() {
        let fragments = find_fragments(n, &adj, &all_edges, &embedded, &in_h);
        debug_assert!(!fragments.is_empty());

        // Admissible faces per fragment.
        let mut choice: Option<(usize, usize)> = None; // (fragment, face)
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("fragments exist");
        let frag = &fragments[fi];

        // Path between two attachments through the fragment.
        let path = fragment_path(frag, &in_h);
        for w in path.windows(2) {
            embedded.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &v in &path {
            in_h[v as usize] = true;
        }

        // Split the face along the path.
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
    true
}

fn find_cycle(adj: &[Vec<u32>]) -> Vec<u32> {
    // DFS from vertex 0; the first back edge closes a cycle.
    let n = adj.len();
    let mut parent = vec![u32::MAX; n];
    let mut state = vec![0u8; n]; // 0 unseen, 1 on stack path
    let mut stack = vec![(0u32, 0usize)];
    state[0] = 1;
    while let Some(&mut (u, ref mut i)) = stack.last_mut() {
        if *i < adj[u as usize].len() {
            let w = adj[u as usize][*i];
            *i += 1;
            if w == parent[u as usize] {
                continue;
            }
            if state[w as usize] == 1 {
                // Back edge u -> w: walk parents from u to w.
                let mut cyc = vec![u];
                let mut cur = u;
                while cur != w {
                    cur = parent[cur as usize];
                    cyc.push(cur);
                }
                return cyc;
            }
            if state[w as usize] == 0 {
                parent[w as usize] = u;
                state[w as usize] = 1;
                stack.push((w, 0));
            }
        } else {
            state[u as usize] = 2;
            stack.pop();
        }
    }
    unreachable!("biconnected graph contains a cycle")
}

struct Fragment {
    attachments: Vec<u32>,
    /// Edges of the fragment (its interior plus attachment edges).
    edges: Vec<(u32, u32)>,
}

fn find_fragments(
    n: u32,
    adj: &[Vec<u32>],
    all_edges: &BTreeSet<(u32, u32)>,
    embedded: &BTreeSet<(u32, u32)>,
    in_h: &[bool],
) -> Vec<Fragment> {
    let mut fragments = Vec::new();
    // Chords: unembedded edges with both ends already embedded.
    for &(a, b) in all_edges.difference(embedded) {
        if in_h[a as usize] && in_h[b as usize] {
            fragments.push(Fragment { attachments: vec![a, b], edges: vec![(a, b)] });
        }
    }
    // Components of G - V(H) with their attachment edges.
    let mut seen = vec![false; n as usize];
    for s in 0..n {
        if in_h[s as usize] || seen[s as usize] {
            continue;
        }
        seen[s as usize] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &adj[u as usize] {
                if !in_h[w as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        let mut attachments = BTreeSet::new();
        let mut fedges = Vec::new();
        for &u in &comp {
            for &w in &adj[u as usize] {
                if in_h[w as usize] {
                    attachments.insert(w);
                    fedges.push((u.min(w), u.max(w)));
                } else if u < w {
                    fedges.push((u, w));
                }
            }
        }
        fedges.sort_unstable();
        fedges.dedup();
        fragments.push(Fragment { attachments: attachments.into_iter().collect(), edges: fedges });
    }
    fragments.sort_by(|a, b| (&a.attachments, &a.edges).cmp(&(&b.attachments, &b.edges)));
    fragments
}

/// A path between two distinct attachments whose interior avoids H.
fn fragment_path(frag: &Fragment, in_h: &[bool]) -> Vec<u32> {
    if frag.edges.len() == 1 {
        let (a, b) = frag.edges[0];
        return vec![a, b];
    }
    let start = frag.attachments[0];
    let targets: BTreeSet<u32> = frag.attachments[1..].iter().copied().collect();
    // BFS from `start`, expanding only through fragment-interior vertices.
    let mut parent: std::collections::BTreeMap<u32, u32> = std::collections::BTreeMap::new();
    let mut adj: std::collections::BTreeMap<u32, Vec<u32>> = std::collections::BTreeMap::new();
    for &(a, b) in &frag.edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    for l in adj.values_mut() {
        l.sort_unstable();
    }
    let mut queue = std::collections::VecDeque::from([start]);
    parent.insert(start, start);
    while let Some(u) = queue.pop_front() {
        for &w in adj.get(&u).map(|v| v.as_slice()).unwrap_or(&[]) {
            if parent.contains_key(&w) {
                continue;
            }
            // Do not route through H except at the very start / end.
            if u != start && in_h[u as usize] {
                continue;
            }
            parent.insert(w, u);
            if targets.contains(&w) {
                let mut path = vec![w];
                let mut cur = w;
                while cur != start {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            queue.push_back(w);
        }
    }
    unreachable!("fragment connects two attachments")
}

fn split_face(face: &[u32], path: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let a = path[0];
    let b = *path.last().unwrap();
    let k = face.len();
    let ia = face.iter().position(|&v| v == a).unwrap();
    // Rotate so `a` sits at index 0.
    let rot: Vec<u32> = (0..k).map(|i| face[(ia + i) % k]).collect();
    let ib = rot.iter().position(|&v| v == b).unwrap();
    let interior = &path[1..path.len() - 1];

    // f1: a -> ... -> b along the face, then back through the path interior.
    let mut f1: Vec<u32> = rot[..=ib].to_vec();
    f1.extend(interior.iter().rev());
    // f2: b -> ... -> a along the rest of the face, then forward through the
    // path interior.
    let mut f2: Vec<u32> = rot[ib..].to_vec();
    f2.push(a);
    f2.extend(interior.iter());
    (f1, f2)
}
