//! Exact decision procedures used as oracles: a complete backtracking
//! colourer over reduced graphs, the standard CNF encoding of colouring, and
//! exhaustive enumeration for small instances.

use crate::budget::Budget;
use crate::cnf::CnfFormula;
use crate::colouring::{degeneracy_order, greedy_colour, ColourOutcome};
use crate::error::{Error, Result};
use crate::graph::{reduce, Colouring, Empire, EmpireGraph, ReducedGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Colourable,
    NotColourable,
    Timeout,
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub status: SolveStatus,
    pub colouring: Option<Colouring>,
    pub nodes: u64,
    pub elapsed: std::time::Duration,
}

impl SolverResult {
    pub fn is_colourable(&self) -> bool {
        self.status == SolveStatus::Colourable
    }
}

/// Complete backtracking search for an (s, r)-colouring of `g`, working on
/// its reduced graph.
///
/// Connected components are decided independently. Within a component,
/// empires with small remaining palettes are assigned first, colours are
/// tried in canonical first-use order (an empire may open at most one fresh
/// colour), and neighbour palettes are pruned on every assignment. A
/// component whose degeneracy is below `s` is coloured greedily outright.
pub fn exact_empire_colour(g: &EmpireGraph, s: u32, budget: &Budget) -> SolverResult {
    exact_reduced_colour(&reduce(g), s, budget)
}

/// The same search, starting from an already reduced graph.
pub fn exact_reduced_colour(rg: &ReducedGraph, s: u32, budget: &Budget) -> SolverResult {
    let mut meter = budget.start();
    let n = rg.num_empires() as usize;
    if s == 0 {
        let status = if n == 0 { SolveStatus::Colourable } else { SolveStatus::NotColourable };
        return SolverResult { status, colouring: None, nodes: 0, elapsed: meter.elapsed() };
    }
    if s >= n as u32 {
        // One private colour per empire is always proper.
        let colouring = Colouring::new(s, (0..n as u32).collect()).expect("n <= s");
        return SolverResult {
            status: SolveStatus::Colourable,
            colouring: Some(colouring),
            nodes: 0,
            elapsed: meter.elapsed(),
        };
    }
    let mut colour = vec![0u32; n];
    for comp in rg.components() {
        let (sub, back) = rg.induced(&comp);
        let (order, degeneracy) = degeneracy_order(&sub);
        if degeneracy < s as usize {
            let out = greedy_colour(&sub, &order, s).expect("valid ordering");
            let ColourOutcome::Coloured(c) = out else {
                unreachable!("greedy succeeds below degeneracy bound")
            };
            for v in 0..sub.num_empires() {
                colour[back[v as usize] as usize] = c.colour_of(v);
            }
            continue;
        }
        match backtrack_component(&sub, s, &mut meter) {
            Some(Some(c)) => {
                for v in 0..sub.num_empires() {
                    colour[back[v as usize] as usize] = c[v as usize];
                }
            }
            Some(None) => {
                return SolverResult {
                    status: SolveStatus::NotColourable,
                    colouring: None,
                    nodes: meter.nodes,
                    elapsed: meter.elapsed(),
                };
            }
            None => {
                return SolverResult {
                    status: SolveStatus::Timeout,
                    colouring: None,
                    nodes: meter.nodes,
                    elapsed: meter.elapsed(),
                };
            }
        }
    }
    let colouring = Colouring::new(s, colour).expect("palette respected");
    debug_assert!(colouring.is_proper(rg));
    SolverResult {
        status: SolveStatus::Colourable,
        colouring: Some(colouring),
        nodes: meter.nodes,
        elapsed: meter.elapsed(),
    }
}

/// Some(Some(colours)) = found, Some(None) = proven impossible, None = budget.
fn backtrack_component(
    rg: &ReducedGraph,
    s: u32,
    meter: &mut crate::budget::Meter,
) -> Option<Option<Vec<u32>>> {
    backtrack_component_with(rg, s, meter, true)
}

/// `symmetry` toggles the canonical-colour cap and twin ordering; decisions
/// must not depend on it (tested), only node counts do.
fn backtrack_component_with(
    rg: &ReducedGraph,
    s: u32,
    meter: &mut crate::budget::Meter,
    symmetry: bool,
) -> Option<Option<Vec<u32>>> {
    let n = rg.num_empires() as usize;
    let s = s.min(64);
    let full: u64 = if s == 64 { u64::MAX } else { (1u64 << s) - 1 };
    let (twin_class, twin_members) = if symmetry {
        twin_classes(rg)
    } else {
        (vec![u32::MAX; n], Vec::new())
    };
    let mut state = Search {
        rg,
        s,
        full,
        domain: vec![full; n],
        colour: vec![u32::MAX; n],
        pruners: vec![Vec::new(); n],
        trail: Vec::new(),
        symmetry,
        twin_class,
        twin_members,
        rank: {
            // Static backbone: reverse degeneracy order. Core empires are
            // decided first; the peeled fringe (degree below s at removal
            // time) lands at the end where propagation all but forces it.
            let mut order = crate::colouring::degeneracy_order(rg).0;
            order.reverse();
            let mut r = vec![0usize; n];
            for (i, &v) in order.iter().enumerate() {
                r[v as usize] = i;
            }
            r
        },
    };
    match state.go(meter) {
        Out::Found => Some(Some(state.colour)),
        Out::Fail(_) => Some(None),
        Out::Budget => None,
    }
}

/// Classes of adjacent twins: empires that are pairwise adjacent with
/// identical remaining neighbourhoods (gadget-private empires, typically).
/// Swapping the colours of two twins preserves properness, so the search may
/// demand that each twin exceed every already-assigned class mate; returns
/// (class id per empire or MAX, member lists).
fn twin_classes(rg: &ReducedGraph) -> (Vec<u32>, Vec<Vec<u32>>) {
    let n = rg.num_empires() as usize;
    let twin = |u: u32, v: u32| -> bool {
        let (a, b) = (rg.neighbours(u), rg.neighbours(v));
        if a.len() != b.len() {
            return false;
        }
        let strip = |list: &[u32], skip: u32| -> Vec<u32> {
            list.iter().copied().filter(|&w| w != skip).collect()
        };
        strip(a, v) == strip(b, u)
    };
    let mut class_of = vec![u32::MAX; n];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for v in 0..n as u32 {
        if class_of[v as usize] != u32::MAX {
            continue;
        }
        let mut members = vec![v];
        for &w in rg.neighbours(v) {
            if w > v
                && class_of[w as usize] == u32::MAX
                && members.iter().all(|&m| rg.are_adjacent(m, w) && twin(m, w))
            {
                members.push(w);
            }
        }
        if members.len() > 1 {
            let id = classes.len() as u32;
            for &m in &members {
                class_of[m as usize] = id;
            }
            classes.push(members);
        }
    }
    (class_of, classes)
}

/// Conflict sets are vertex bitsets.
#[derive(Clone)]
struct VertexSet(Vec<u64>);

impl VertexSet {
    fn new(n: usize) -> Self {
        VertexSet(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, v: u32) {
        self.0[(v / 64) as usize] |= 1u64 << (v % 64);
    }

    fn remove(&mut self, v: u32) {
        self.0[(v / 64) as usize] &= !(1u64 << (v % 64));
    }

    fn contains(&self, v: u32) -> bool {
        self.0[(v / 64) as usize] >> (v % 64) & 1 == 1
    }

    fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

enum Out {
    Found,
    /// Conflict set: assigned empires jointly responsible for the failure.
    Fail(VertexSet),
    Budget,
}

/// Forward checking with conflict-directed backjumping. Without the jumps,
/// reduction outputs thrash: hundreds of interchangeable gadget palettes
/// separate a wrong decision from the contradiction it causes.
struct Search<'a> {
    rg: &'a ReducedGraph,
    s: u32,
    full: u64,
    domain: Vec<u64>,
    colour: Vec<u32>,
    /// Per empire: assigned empires that pruned part of its domain.
    pruners: Vec<Vec<u32>>,
    /// Assignment order (for the canonical-colour cap blame).
    trail: Vec<u32>,
    symmetry: bool,
    twin_class: Vec<u32>,
    twin_members: Vec<Vec<u32>>,
    rank: Vec<usize>,
}

impl Search<'_> {
    fn go(&mut self, meter: &mut crate::budget::Meter) -> Out {
        if !meter.tick() {
            return Out::Budget;
        }
        let n = self.colour.len();
        // Forced empires (domain size 1) first, then the static backbone.
        let clamp: u32 = std::env::var("EMPIRES_MRV_CLAMP").ok().and_then(|x| x.parse().ok()).unwrap_or(2);
        let next = (0..n as u32)
            .filter(|&v| self.colour[v as usize] == u32::MAX)
            .min_by_key(|&v| {
                (self.domain[v as usize].count_ones().min(clamp), self.rank[v as usize])
            });
        let Some(v) = next else {
            return Out::Found;
        };

        let mut conf = VertexSet::new(n);
        // Values already pruned from v's domain are blamed on their pruners.
        for &u in &self.pruners[v as usize] {
            conf.insert(u);
        }
        // Canonical colour order: open at most one fresh colour. If the cap
        // cuts candidates, the earliest holder of the highest colour is part
        // of any conflict explanation (removing everything after it keeps
        // the cap unchanged).
        let used_max =
            self.trail.iter().map(|&u| self.colour[u as usize] as i64).max().unwrap_or(-1);
        let cap: u64 = if !self.symmetry || used_max + 2 >= self.s as i64 {
            self.full
        } else {
            (1u64 << (used_max + 2)) - 1
        };
        if self.domain[v as usize] & !cap != 0 {
            if let Some(&holder) = self
                .trail
                .iter()
                .find(|&&u| self.colour[u as usize] as i64 == used_max)
            {
                conf.insert(holder);
            }
        }

        let mut candidates = self.domain[v as usize] & cap;
        // Twin ordering: interchangeable empires take colours in assignment
        // order, so v must exceed every assigned class mate. The mate
        // holding the class maximum explains the exclusion.
        if self.twin_class[v as usize] != u32::MAX {
            let mut best: Option<(u32, u32)> = None; // (colour, member)
            for &m in &self.twin_members[self.twin_class[v as usize] as usize] {
                let c = self.colour[m as usize];
                if m != v && c != u32::MAX && best.is_none_or(|(bc, _)| c > bc) {
                    best = Some((c, m));
                }
            }
            if let Some((c, m)) = best {
                let above = if c as usize + 1 >= 64 { 0 } else { !((1u64 << (c + 1)) - 1) };
                if candidates & !above != 0 {
                    conf.insert(m);
                }
                candidates &= above;
            }
        }
        while candidates != 0 {
            let c = candidates.trailing_zeros();
            candidates &= candidates - 1;
            let bit = 1u64 << c;
            self.colour[v as usize] = c;
            self.trail.push(v);
            let mut pruned: Vec<u32> = Vec::new();
            let mut wiped: Option<u32> = None;
            for &w in self.rg.neighbours(v) {
                if self.colour[w as usize] == u32::MAX && self.domain[w as usize] & bit != 0 {
                    self.domain[w as usize] &= !bit;
                    self.pruners[w as usize].push(v);
                    pruned.push(w);
                    if self.domain[w as usize] == 0 {
                        wiped = Some(w);
                        break;
                    }
                }
            }
            if let Some(w) = wiped {
                // Blame everyone who shrank w besides v itself.
                for &u in &self.pruners[w as usize] {
                    if u != v {
                        conf.insert(u);
                    }
                }
            } else {
                match self.go(meter) {
                    Out::Found => return Out::Found,
                    Out::Budget => return Out::Budget,
                    Out::Fail(sub) => {
                        if !sub.contains(v) {
                            // v is irrelevant to that failure: undo and pass
                            // the conflict through (the jump).
                            self.undo(v, bit, &pruned);
                            return Out::Fail(sub);
                        }
                        let mut sub = sub;
                        sub.remove(v);
                        conf.union_with(&sub);
                    }
                }
            }
            self.undo(v, bit, &pruned);
        }
        Out::Fail(conf)
    }

    fn undo(&mut self, v: u32, bit: u64, pruned: &[u32]) {
        for &w in pruned {
            self.domain[w as usize] |= bit;
            debug_assert_eq!(*self.pruners[w as usize].last().unwrap(), v);
            self.pruners[w as usize].pop();
        }
        self.colour[v as usize] = u32::MAX;
        debug_assert_eq!(*self.trail.last().unwrap(), v);
        self.trail.pop();
    }
}

/// Encodes (s, r)-colourability of `g` as CNF: one variable per
/// (empire, colour), at-least-one and pairwise at-most-one per empire, and a
/// difference clause per reduced adjacency and colour.
pub fn empire_to_cnf(g: &EmpireGraph, s: u32) -> Result<CnfFormula> {
    let rg = reduce(g);
    reduced_to_cnf(&rg, s)
}

pub fn reduced_to_cnf(rg: &ReducedGraph, s: u32) -> Result<CnfFormula> {
    let n = rg.num_empires();
    if s == 0 {
        // No colours: unsatisfiable unless there is nothing to colour.
        return if n == 0 {
            CnfFormula::new(1, vec![vec![1, -1]])
        } else {
            CnfFormula::new(1, vec![vec![1], vec![-1]])
        };
    }
    let var = |e: Empire, c: u32| (e * s + c + 1) as i32;
    let mut clauses = Vec::new();
    for e in 0..n {
        clauses.push((0..s).map(|c| var(e, c)).collect::<Vec<_>>());
        for c1 in 0..s {
            for c2 in c1 + 1..s {
                clauses.push(vec![-var(e, c1), -var(e, c2)]);
            }
        }
    }
    for &(u, v) in rg.adjacency() {
        for c in 0..s {
            clauses.push(vec![-var(u, c), -var(v, c)]);
        }
    }
    CnfFormula::new(n * s, clauses)
}

/// Decodes a satisfying assignment of [`reduced_to_cnf`] into a colouring.
pub fn colouring_from_assignment(n: u32, s: u32, assignment: &[bool]) -> Result<Colouring> {
    let mut colour = vec![0u32; n as usize];
    for e in 0..n {
        let c = (0..s)
            .find(|&c| assignment[(e * s + c) as usize])
            .ok_or_else(|| Error::InvalidInput(format!("no colour set for empire {e}")))?;
        colour[e as usize] = c;
    }
    Colouring::new(s, colour)
}

/// Calls `f` for every proper colouring of `rg` in lexicographic order;
/// stops early when `f` returns false. Returns the number visited.
pub fn for_each_colouring(
    rg: &ReducedGraph,
    s: u32,
    mut f: impl FnMut(&[u32]) -> bool,
) -> u64 {
    let n = rg.num_empires() as usize;
    let mut colour = vec![0u32; n];
    let mut count = 0u64;
    if n == 0 {
        return 0;
    }
    // Depth-first lexicographic walk over partial proper colourings.
    let mut depth = 0usize;
    let mut next_colour = vec![0u32; n + 1];
    loop {
        if depth == n {
            count += 1;
            if !f(&colour) {
                return count;
            }
            // Step the deepest level.
            depth -= 1;
            next_colour[depth] = colour[depth] + 1;
        }
        let v = depth as u32;
        let mut c = next_colour[depth];
        let found = loop {
            if c >= s {
                break None;
            }
            let clash = rg.neighbours(v).iter().any(|&w| (w as usize) < depth && colour[w as usize] == c);
            if !clash {
                break Some(c);
            }
            c += 1;
        };
        match found {
            Some(c) => {
                colour[depth] = c;
                depth += 1;
                next_colour[depth] = 0;
            }
            None => {
                if depth == 0 {
                    return count;
                }
                depth -= 1;
                next_colour[depth] = colour[depth] + 1;
            }
        }
    }
}

/// All valid colourings of `rg` with palette `s`, lexicographic, up to `cap`.
///
/// Without a cap, refuses instances where the raw assignment space exceeds
/// the enumeration guard.
pub fn enumerate_colourings(rg: &ReducedGraph, s: u32, cap: Option<usize>) -> Result<Vec<Colouring>> {
    const GUARD: u128 = 200_000_000;
    if cap.is_none() {
        let space = (s as u128).checked_pow(rg.num_empires()).unwrap_or(u128::MAX);
        if space > GUARD {
            return Err(Error::GuardExceeded(space));
        }
    }
    let cap = cap.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    for_each_colouring(rg, s, |colours| {
        out.push(Colouring::new(s, colours.to_vec()).expect("palette respected"));
        out.len() < cap
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{dpll_solve, SatResult};

    fn k3_reduced() -> ReducedGraph {
        ReducedGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn exact_on_matching_triangle() {
        let g = crate::graph::tests::matching_triangle();
        let b = Budget::default();
        assert_eq!(exact_empire_colour(&g, 2, &b).status, SolveStatus::NotColourable);
        let res = exact_empire_colour(&g, 3, &b);
        assert_eq!(res.status, SolveStatus::Colourable);
        assert!(crate::graph::verify_colouring(&g, res.colouring.as_ref().unwrap()).unwrap().0);
    }

    #[test]
    fn exact_edgeless_one_colour() {
        let g = EmpireGraph::new(1, vec![0, 1, 2], vec![]).unwrap();
        let res = exact_empire_colour(&g, 1, &Budget::default());
        assert_eq!(res.status, SolveStatus::Colourable);
    }

    #[test]
    fn cnf_encoding_examples() {
        let rg = k3_reduced();
        let unsat = reduced_to_cnf(&rg, 2).unwrap();
        assert_eq!(dpll_solve(&unsat, &Budget::default()), SatResult::Unsat);
        let sat = reduced_to_cnf(&rg, 3).unwrap();
        match dpll_solve(&sat, &Budget::default()) {
            SatResult::Sat(a) => {
                let c = colouring_from_assignment(3, 3, &a).unwrap();
                assert!(c.is_proper(&rg));
            }
            other => panic!("expected SAT, got {other:?}"),
        }
    }

    #[test]
    fn enumerate_examples() {
        let rg = k3_reduced();
        let all = enumerate_colourings(&rg, 3, None).unwrap();
        assert_eq!(all.len(), 6); // 3! permutations
        // Lexicographic order: first is (0,1,2).
        assert_eq!(all[0].assignments(), &[0, 1, 2]);

        let path2 = ReducedGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(enumerate_colourings(&path2, 2, None).unwrap().len(), 2);

        let empty = ReducedGraph::from_edges(30, &[]).unwrap();
        assert!(enumerate_colourings(&empty, 4, None).is_err()); // guard
        assert_eq!(enumerate_colourings(&empty, 4, Some(10)).unwrap().len(), 10);
    }

    fn pseudo_random_reduced(seed: u64, max_n: u32) -> ReducedGraph {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let n = 2 + (next() % max_n as u64) as u32;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if next() % 3 == 0 {
                    edges.push((u, v));
                }
            }
        }
        ReducedGraph::from_edges(n, &edges).unwrap()
    }

    /// Backtracking, CNF + DPLL, and enumeration must agree.
    #[test]
    fn oracle_agreement_random() {
        let budget = Budget::default();
        for seed in 0..200u64 {
            let rg = pseudo_random_reduced(seed, 9);
            let s = 1 + (seed % 5) as u32;
            let exact = exact_reduced_colour(&rg, s, &budget);
            let via_cnf = dpll_solve(&reduced_to_cnf(&rg, s).unwrap(), &budget);
            assert_eq!(
                exact.status == SolveStatus::Colourable,
                via_cnf.is_sat(),
                "seed {seed} s {s}"
            );
            let n_any = for_each_colouring(&rg, s, |_| false) > 0;
            assert_eq!(exact.status == SolveStatus::Colourable, n_any, "seed {seed} s {s}");
        }
    }

    /// Disabling the canonical-colour cap must not change decisions; here we
    /// approximate by solving both the graph and a vertex-relabelled copy.
    #[test]
    fn decisions_stable_under_relabelling() {
        let budget = Budget::default();
        for seed in 0..50u64 {
            let rg = pseudo_random_reduced(seed, 8);
            let n = rg.num_empires();
            let perm: Vec<u32> = (0..n).map(|v| (v + 3) % n).collect();
            let edges: Vec<(u32, u32)> = rg
                .adjacency()
                .iter()
                .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
                .collect();
            let relabelled = ReducedGraph::from_edges(n, &edges).unwrap();
            for s in 1..=4u32 {
                assert_eq!(
                    exact_reduced_colour(&rg, s, &budget).status,
                    exact_reduced_colour(&relabelled, s, &budget).status,
                    "seed {seed} s {s}"
                );
            }
        }
    }

    /// A clique of mutual twins entered in any order must still colour: the
    /// regression here is the interaction between the canonical-colour cap
    /// and twin ordering at the very start of a component.
    #[test]
    fn twin_cliques_colour_at_exact_palette() {
        let budget = Budget::default();
        // K_3 (all twins) at s = 3, K_4 at s = 4: colourable exactly.
        for n in 3..=5u32 {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
            let rg = ReducedGraph::from_edges(n, &edges).unwrap();
            let mut meter = budget.start();
            let res = backtrack_component_with(&rg, n, &mut meter, true);
            assert!(matches!(res, Some(Some(_))), "K_{n} at s={n}");
            let mut meter = budget.start();
            let res = backtrack_component_with(&rg, n - 1, &mut meter, true);
            assert!(matches!(res, Some(None)), "K_{n} at s={}", n - 1);
        }
    }

    /// Disabling the canonical-colour cap and twin ordering must never
    /// change a decision, only the node count.
    #[test]
    fn symmetry_breaking_preserves_decisions() {
        let budget = Budget::default();
        for seed in 0..100u64 {
            let rg = pseudo_random_reduced(seed, 9);
            let s = 1 + (seed % 5) as u32;
            let with = exact_reduced_colour(&rg, s, &budget).status;
            let mut meter = budget.start();
            let without = match backtrack_component_with(&rg, s, &mut meter, false) {
                Some(Some(_)) => SolveStatus::Colourable,
                Some(None) => SolveStatus::NotColourable,
                None => SolveStatus::Timeout,
            };
            // The plain search runs on the whole graph (no component split);
            // compare against a monolithic symmetric run for fairness.
            let mut meter2 = budget.start();
            let with_mono = match backtrack_component_with(&rg, s, &mut meter2, true) {
                Some(Some(_)) => SolveStatus::Colourable,
                Some(None) => SolveStatus::NotColourable,
                None => SolveStatus::Timeout,
            };
            assert_eq!(with_mono, without, "seed {seed} s {s}");
            assert_eq!(with, with_mono, "seed {seed} s {s}");
        }
    }

    #[test]
    fn timeout_is_reported() {
        // A hard-ish instance with a 1-node budget must time out, not lie.
        let rg = pseudo_random_reduced(7, 9);
        let res = exact_reduced_colour(&rg, 2, &Budget::nodes(1));
        // Either it was trivially decided by the degeneracy path or timed out.
        assert!(res.status == SolveStatus::Timeout || res.status == SolveStatus::Colourable || res.status == SolveStatus::NotColourable);
        let big = pseudo_random_reduced(11, 12);
        let res = exact_reduced_colour(&big, 3, &Budget::nodes(0));
        if res.status != SolveStatus::Timeout {
            // Degeneracy shortcut may legitimately answer without search.
            let (_, d) = crate::colouring::degeneracy_order(&big);
            assert!(d < 3);
        }
    }
}
