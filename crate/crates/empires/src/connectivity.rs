//! Connectivity helpers shared by the Brooks colourer and the planarity test:
//! components, cut vertices and biconnected components (Tarjan).

/// Adjacency lists from a normalised edge list.
pub fn adjacency(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    adj
}

/// Connected components as ascending vertex lists, ordered by smallest member.
pub fn components(n: usize, adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s as u32];
        let mut stack = vec![s as u32];
        while let Some(u) = stack.pop() {
            for &w in &adj[u as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(n: usize, adj: &[Vec<u32>]) -> bool {
    n == 0 || components(n, adj).len() == 1
}

/// Biconnected components (as edge lists) and cut vertices.
///
/// Isolated vertices belong to no block. Bridges form their own blocks.
pub struct Blocks {
    pub blocks: Vec<Vec<(u32, u32)>>,
    pub cut_vertices: Vec<u32>,
}

pub fn biconnected(n: usize, adj: &[Vec<u32>]) -> Blocks {
    // Iterative Tarjan with an explicit edge stack.
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![u32::MAX; n];
    let mut timer = 0usize;
    let mut edge_stack: Vec<(u32, u32)> = Vec::new();
    let mut blocks = Vec::new();
    let mut cuts = vec![false; n];

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // frame: (vertex, next adjacency index)
        let mut stack: Vec<(u32, usize)> = vec![(root as u32, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0usize;

        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i < adj[u as usize].len() {
                let w = adj[u as usize][*i];
                *i += 1;
                if w == parent[u as usize] {
                    continue;
                }
                if disc[w as usize] == usize::MAX {
                    parent[w as usize] = u;
                    edge_stack.push((u, w));
                    disc[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    if u as usize == root {
                        root_children += 1;
                    }
                    stack.push((w, 0));
                } else if disc[w as usize] < disc[u as usize] {
                    edge_stack.push((u, w));
                    low[u as usize] = low[u as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    low[p as usize] = low[p as usize].min(low[u as usize]);
                    if low[u as usize] >= disc[p as usize] {
                        // p separates u's subtree: pop one block
                        let mut block = Vec::new();
                        while let Some(&(a, b)) = edge_stack.last() {
                            if disc[a as usize] >= disc[u as usize]
                                || (a == p && b == u)
                            {
                                block.push((a.min(b), a.max(b)));
                                edge_stack.pop();
                                if a == p && b == u {
                                    break;
                                }
                            } else {
                                break;
                            }
                        }
                        block.sort_unstable();
                        block.dedup();
                        if !block.is_empty() {
                            blocks.push(block);
                        }
                        if p as usize != root {
                            cuts[p as usize] = true;
                        }
                    }
                }
            }
        }
        if root_children >= 2 {
            cuts[root] = true;
        }
    }
    blocks.sort();
    let cut_vertices = (0..n as u32).filter(|&v| cuts[v as usize]).collect();
    Blocks { blocks, cut_vertices }
}

/// Vertices of a block edge list, ascending.
pub fn block_vertices(block: &[(u32, u32)]) -> Vec<u32> {
    let mut vs: Vec<u32> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_triangles_sharing_a_vertex() {
        let edges = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)];
        let adj = adjacency(5, &edges);
        let b = biconnected(5, &adj);
        assert_eq!(b.blocks.len(), 2);
        assert_eq!(b.cut_vertices, vec![2]);
    }

    #[test]
    fn path_gives_bridge_blocks() {
        let edges = [(0, 1), (1, 2), (2, 3)];
        let adj = adjacency(4, &edges);
        let b = biconnected(4, &adj);
        assert_eq!(b.blocks.len(), 3);
        assert_eq!(b.cut_vertices, vec![1, 2]);
    }

    #[test]
    fn cycle_is_one_block() {
        let edges = [(0, 1), (1, 2), (2, 3), (0, 3)];
        let adj = adjacency(4, &edges);
        let b = biconnected(4, &adj);
        assert_eq!(b.blocks.len(), 1);
        assert!(b.cut_vertices.is_empty());
        assert_eq!(block_vertices(&b.blocks[0]), vec![0, 1, 2, 3]);
    }
}
