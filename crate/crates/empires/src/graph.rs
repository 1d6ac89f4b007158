//! Vertex-level empire graphs, their reduced (pseudo-vertex) graphs and
//! colourings.
//!
//! An [`EmpireGraph`] is a simple graph together with a partition of its
//! vertices into *empires*. Colouring only ever happens on the
//! [`ReducedGraph`] obtained by contracting each empire to a single
//! pseudo-vertex: intra-empire edges vanish as loops, and parallel edges
//! between two empires collapse to one (their count is kept in a side table
//! for diagnostics).

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Vertex identifier, dense from 0.
pub type Vertex = u32;
/// Empire identifier, dense from 0.
pub type Empire = u32;

/// A simple graph plus a partition of its vertices into empires.
///
/// `r` is the empire capacity: every empire has at most `r` vertices, and in
/// the strict normal form exactly `r` (see [`EmpireGraph::is_strict`]).
/// Intra-empire edges are legal and ignored by colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpireGraph {
    r: u32,
    empire_of: Vec<Empire>,
    num_empires: u32,
    /// Normalised (u < v), sorted, deduplicated.
    edges: Vec<(Vertex, Vertex)>,
}

impl EmpireGraph {
    /// Builds a graph, validating: no self-loops, dense empire ids, empire
    /// sizes at most `r`.
    pub fn new(r: u32, empire_of: Vec<Empire>, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidInput("empire capacity r must be positive".into()));
        }
        let n = empire_of.len() as u32;
        let num_empires = empire_of.iter().map(|&e| e + 1).max().unwrap_or(0);
        let mut sizes = vec![0u32; num_empires as usize];
        for &e in &empire_of {
            sizes[e as usize] += 1;
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidInput("empire ids must be dense from 0".into()));
        }
        if let Some(e) = sizes.iter().position(|&c| c > r) {
            return Err(Error::InvalidInput(format!(
                "empire {e} has {} vertices, capacity r = {r}",
                sizes[e]
            )));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge ({u},{v}) out of range")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(EmpireGraph { r, empire_of, num_empires, edges: norm })
    }

    /// Like [`EmpireGraph::new`] but additionally requires every empire to
    /// have exactly `r` vertices (the strict normal form).
    pub fn new_strict(r: u32, empire_of: Vec<Empire>, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let g = Self::new(r, empire_of, edges)?;
        if !g.is_strict() {
            return Err(Error::InvalidInput("some empire does not have exactly r vertices".into()));
        }
        Ok(g)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn num_vertices(&self) -> u32 {
        self.empire_of.len() as u32
    }

    pub fn num_empires(&self) -> u32 {
        self.num_empires
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Normalised, sorted edge list.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn empire_of(&self, v: Vertex) -> Empire {
        self.empire_of[v as usize]
    }

    pub fn empire_map(&self) -> &[Empire] {
        &self.empire_of
    }

    /// Vertices of one empire, ascending.
    pub fn empire_vertices(&self, e: Empire) -> Vec<Vertex> {
        (0..self.num_vertices()).filter(|&v| self.empire_of[v as usize] == e).collect()
    }

    /// True when every empire has exactly `r` vertices.
    pub fn is_strict(&self) -> bool {
        let mut sizes = vec![0u32; self.num_empires as usize];
        for &e in &self.empire_of {
            sizes[e as usize] += 1;
        }
        sizes.iter().all(|&c| c == self.r)
    }

    /// Vertex-level adjacency lists (ascending neighbours).
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.num_vertices() as usize];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    pub fn vertex_degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Max vertex degree, 0 for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.num_vertices() as usize];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// The graph on empires obtained by contracting each empire of an
/// [`EmpireGraph`] to a pseudo-vertex. Stored simple; parallel-edge counts
/// are kept in `multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    num_empires: u32,
    /// Normalised (u < v), sorted, deduplicated empire pairs.
    adjacency: Vec<(Empire, Empire)>,
    /// Cross-empire edge counts per adjacent pair (diagnostic only).
    multiplicity: BTreeMap<(Empire, Empire), u32>,
    neighbours: Vec<Vec<Empire>>,
}

impl ReducedGraph {
    /// Builds a reduced graph directly from an empire-pair edge list
    /// (multiplicity 1 everywhere). Loops are rejected.
    pub fn from_edges(num_empires: u32, pairs: &[(Empire, Empire)]) -> Result<Self> {
        let mut mult = BTreeMap::new();
        for &(u, v) in pairs {
            if u == v {
                return Err(Error::InvalidInput(format!("loop at empire {u}")));
            }
            if u >= num_empires || v >= num_empires {
                return Err(Error::InvalidInput(format!("pair ({u},{v}) out of range")));
            }
            *mult.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
        Ok(Self::from_multiplicity(num_empires, mult))
    }

    fn from_multiplicity(num_empires: u32, multiplicity: BTreeMap<(Empire, Empire), u32>) -> Self {
        let adjacency: Vec<(Empire, Empire)> = multiplicity.keys().copied().collect();
        let mut neighbours = vec![Vec::new(); num_empires as usize];
        for &(u, v) in &adjacency {
            neighbours[u as usize].push(v);
            neighbours[v as usize].push(u);
        }
        for l in &mut neighbours {
            l.sort_unstable();
        }
        ReducedGraph { num_empires, adjacency, multiplicity, neighbours }
    }

    pub fn num_empires(&self) -> u32 {
        self.num_empires
    }

    pub fn adjacency(&self) -> &[(Empire, Empire)] {
        &self.adjacency
    }

    pub fn num_adjacent_pairs(&self) -> usize {
        self.adjacency.len()
    }

    pub fn multiplicity(&self, u: Empire, v: Empire) -> u32 {
        *self.multiplicity.get(&(u.min(v), u.max(v))).unwrap_or(&0)
    }

    pub fn are_adjacent(&self, u: Empire, v: Empire) -> bool {
        self.multiplicity(u, v) > 0
    }

    pub fn neighbours(&self, e: Empire) -> &[Empire] {
        &self.neighbours[e as usize]
    }

    pub fn degree(&self, e: Empire) -> usize {
        self.neighbours[e as usize].len()
    }

    /// Induced subgraph on `keep` (ascending empire ids), relabelled densely.
    /// Returns the subgraph and the map from new ids back to originals.
    pub fn induced(&self, keep: &[Empire]) -> (ReducedGraph, Vec<Empire>) {
        let mut back = keep.to_vec();
        back.sort_unstable();
        back.dedup();
        let mut fwd = BTreeMap::new();
        for (i, &e) in back.iter().enumerate() {
            fwd.insert(e, i as Empire);
        }
        let mut mult = BTreeMap::new();
        for (&(u, v), &c) in &self.multiplicity {
            if let (Some(&nu), Some(&nv)) = (fwd.get(&u), fwd.get(&v)) {
                mult.insert((nu.min(nv), nu.max(nv)), c);
            }
        }
        (Self::from_multiplicity(back.len() as u32, mult), back)
    }

    /// Connected components as ascending id lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Empire>> {
        let n = self.num_empires as usize;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s as Empire];
            seen[s] = true;
            let mut stack = vec![s as Empire];
            while let Some(u) = stack.pop() {
                for &w in self.neighbours(u) {
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

    /// True when the whole reduced graph is a clique on all its empires.
    pub fn is_complete(&self) -> bool {
        let n = self.num_empires as usize;
        self.adjacency.len() == n * (n - 1) / 2
    }
}

/// Contracts each empire of `g` to a pseudo-vertex.
///
/// Intra-empire edges are dropped, parallel cross edges collapse; the
/// parallel-edge count survives in the multiplicity table.
pub fn reduce(g: &EmpireGraph) -> ReducedGraph {
    let mut mult = BTreeMap::new();
    for &(u, v) in g.edges() {
        let (eu, ev) = (g.empire_of(u), g.empire_of(v));
        if eu != ev {
            *mult.entry((eu.min(ev), eu.max(ev))).or_insert(0) += 1;
        }
    }
    ReducedGraph::from_multiplicity(g.num_empires(), mult)
}

/// An assignment of at most `s` colours to empires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    s: u32,
    colour_of: Vec<u32>,
}

impl Colouring {
    pub fn new(s: u32, colour_of: Vec<u32>) -> Result<Self> {
        if let Some(&c) = colour_of.iter().find(|&&c| c >= s) {
            return Err(Error::InvalidInput(format!("colour {c} outside palette 0..{s}")));
        }
        Ok(Colouring { s, colour_of })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn colour_of(&self, e: Empire) -> u32 {
        self.colour_of[e as usize]
    }

    pub fn assignments(&self) -> &[u32] {
        &self.colour_of
    }

    pub fn num_empires(&self) -> u32 {
        self.colour_of.len() as u32
    }

    pub fn colours_used(&self) -> u32 {
        self.colour_of.iter().map(|&c| c + 1).max().unwrap_or(0)
    }

    /// Proper on the reduced graph: no adjacent pair shares a colour.
    pub fn is_proper(&self, rg: &ReducedGraph) -> bool {
        rg.num_empires() == self.num_empires()
            && rg.adjacency().iter().all(|&(u, v)| self.colour_of(u) != self.colour_of(v))
    }
}

/// Structured evidence that a colouring attempt failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfeasibilityWitness {
    /// `s + 1` pairwise-adjacent empires.
    CliqueFound(Vec<Empire>),
    /// An odd cycle of empires; only emitted for `s = 2`.
    OddCycleFound(Vec<Empire>),
    /// Some empire saw all `s` colours: the stuck empire followed by the
    /// coloured neighbours blocking it.
    ExhaustedSearch(Vec<Empire>),
}

impl InfeasibilityWitness {
    pub fn empires(&self) -> &[Empire] {
        match self {
            InfeasibilityWitness::CliqueFound(v)
            | InfeasibilityWitness::OddCycleFound(v)
            | InfeasibilityWitness::ExhaustedSearch(v) => v,
        }
    }
}

/// Checks a colouring against the vertex-level graph.
///
/// Returns whether every cross-empire edge is bichromatic, plus the list of
/// violated vertex-level edges. Intra-empire edges are ignored. Errors when
/// the colouring does not cover every empire of `g`.
pub fn verify_colouring(g: &EmpireGraph, c: &Colouring) -> Result<(bool, Vec<(Vertex, Vertex)>)> {
    if c.num_empires() < g.num_empires() {
        return Err(Error::InvalidInput(format!(
            "colouring covers {} empires, graph has {}",
            c.num_empires(),
            g.num_empires()
        )));
    }
    let mut violated = Vec::new();
    for &(u, v) in g.edges() {
        let (eu, ev) = (g.empire_of(u), g.empire_of(v));
        if eu != ev && c.colour_of(eu) == c.colour_of(ev) {
            violated.push((u, v));
        }
    }
    Ok((violated.is_empty(), violated))
}
