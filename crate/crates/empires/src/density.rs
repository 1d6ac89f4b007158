//! Exact maximum average degree over induced subgraphs, the membership test
//! for the SPARSE(sigma) class.
//!
//! Degeneracy only bounds this quantity, so we compute it exactly with the
//! classic flow construction: for a guess g, build a network whose min cut
//! falls below `2|E|` exactly when some subgraph has average degree above g,
//! and iterate Dinkelbach-style on exact rationals until the guess is tight.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact `max` over non-empty vertex subsets S of `2|E(S)| / |S|`.
pub fn max_subgraph_avg_degree(n: u32, edges: &[(u32, u32)]) -> Result<Ratio<i64>> {
    if n == 0 {
        return Err(Error::InvalidInput("empty graph".into()));
    }
    for &(u, v) in edges {
        if u == v || u >= n || v >= n {
            return Err(Error::InvalidInput(format!("bad edge ({u},{v})")));
        }
    }
    let m = edges.len() as i64;
    if m == 0 {
        return Ok(Ratio::from_integer(0));
    }
    let mut deg = vec![0i64; n as usize];
    for &(u, v) in edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    // (clippy: the v/deg indexing below is over network nodes, fine)

    // Start from the whole graph's average degree; every Dinkelbach round
    // either certifies the guess or produces a strictly denser subgraph.
    let mut guess = Ratio::new(2 * m, n as i64);
    loop {
        match denser_subgraph(n, edges, &deg, guess) {
            Some(subset) => {
                let inside = |v: u32| subset[v as usize];
                let e_s = edges.iter().filter(|&&(u, v)| inside(u) && inside(v)).count() as i64;
                let size = subset.iter().filter(|&&b| b).count() as i64;
                let better = Ratio::new(2 * e_s, size);
                debug_assert!(better > guess);
                guess = better;
            }
            None => return Ok(guess),
        }
    }
}

/// Returns a subset with average degree strictly above `g`, if one exists.
///
/// Network: source -> v with capacity deg(v), v -> sink with capacity g,
/// both arcs of every edge with capacity 1; all scaled by the denominator of
/// g. The min cut is `2|E| - max_S (2|E(S)| - g|S|)`.
fn denser_subgraph(n: u32, edges: &[(u32, u32)], deg: &[i64], g: Ratio<i64>) -> Option<Vec<bool>> {
    let p = *g.numer();
    let q = *g.denom();
    let source = n as usize;
    let sink = n as usize + 1;
    let mut net = Dinic::new(n as usize + 2);
    for (v, &d) in deg.iter().enumerate() {
        net.add_edge(source, v, q * d);
        net.add_edge(v, sink, p);
    }
    for &(u, v) in edges {
        net.add_edge(u as usize, v as usize, q);
        net.add_edge(v as usize, u as usize, q);
    }
    let flow = net.max_flow(source, sink);
    let total = 2 * (edges.len() as i64) * q;
    if flow >= total {
        return None;
    }
    let reach = net.residual_reachable(source);
    let subset: Vec<bool> = (0..n as usize).map(|v| reach[v]).collect();
    debug_assert!(subset.iter().any(|&b| b));
    Some(subset)
}

struct Dinic {
    // to, cap, rev-index
    graph: Vec<Vec<(usize, i64, usize)>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { graph: vec![Vec::new(); n], level: vec![0; n], iter: vec![0; n] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        let rev_from = self.graph[to].len();
        let rev_to = self.graph[from].len();
        self.graph[from].push((to, cap, rev_from));
        self.graph[to].push((from, 0, rev_to));
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(to, cap, _) in &self.graph[u] {
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[u] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.iter[u] < self.graph[u].len() {
            let (to, cap, rev) = self.graph[u][self.iter[u]];
            if cap > 0 && self.level[u] < self.level[to] {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.graph[u][self.iter[u]].1 -= d;
                    self.graph[to][rev].1 += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(to, cap, _) in &self.graph[u] {
                if cap > 0 && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        seen
    }
}
