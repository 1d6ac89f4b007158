//! Formula graphs: the template that encodes a k-CNF as an s-colouring
//! instance, with a truth clique T/F/X^1..X^{s-2}, complementary literal
//! pairs, and one (s-1)-group of clause vertices per clause.

use crate::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::graph::{EmpireGraph, Vertex};

/// An (s,k)-formula graph. Vertices are laid out as: the truth clique
/// (T, F, X^1..X^{s-2}), then the 2n literal vertices (a_i, abar_i pairs),
/// then m groups of s-1 clause vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaGraph {
    pub s: u32,
    pub k: u32,
    pub num_vars: u32,
    pub num_clauses: u32,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl FormulaGraph {
    pub fn num_vertices(&self) -> u32 {
        self.s + 2 * self.num_vars + self.num_clauses * (self.s - 1)
    }

    pub fn t_vertex(&self) -> Vertex {
        0
    }

    pub fn f_vertex(&self) -> Vertex {
        1
    }

    /// X^i for i in 1..=s-2.
    pub fn x_vertex(&self, i: u32) -> Vertex {
        debug_assert!(1 <= i && i <= self.s - 2);
        1 + i
    }

    /// The positive literal vertex of variable v (0-based).
    pub fn literal_vertex(&self, v: u32, negated: bool) -> Vertex {
        self.s + 2 * v + negated as u32
    }

    /// Clause vertex c^{i,j} with i 0-based, j in 1..=s-1.
    pub fn clause_vertex(&self, i: u32, j: u32) -> Vertex {
        debug_assert!(1 <= j && j < self.s);
        self.s + 2 * self.num_vars + i * (self.s - 1) + (j - 1)
    }

    pub fn degree_of(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// The unique literal vertex adjacent to clause vertex c^{i,j}, present
    /// exactly when j <= k.
    pub fn clause_literal_neighbour(&self, i: u32, j: u32) -> Option<Vertex> {
        let c = self.clause_vertex(i, j);
        let lit_range = self.s..self.s + 2 * self.num_vars;
        self.edges.iter().find_map(|&(a, b)| {
            if a == c && lit_range.contains(&b) {
                Some(b)
            } else if b == c && lit_range.contains(&a) {
                Some(a)
            } else {
                None
            }
        })
    }

    /// As a 1-empire graph (each vertex its own empire), the form every
    /// empire-level operation accepts.
    pub fn as_empire_graph(&self) -> EmpireGraph {
        EmpireGraph::new(1, (0..self.num_vertices()).collect(), self.edges.clone())
            .expect("formula graph is simple")
    }
}

/// Builds the (s,k)-formula graph of a k-CNF: s-colourable iff the formula
/// is satisfiable. Clauses narrower than k are padded by repeating their
/// last literal.
pub fn ksat_to_formula_graph(phi: &CnfFormula, s: u32) -> Result<FormulaGraph> {
    let k = phi.k();
    if s < 3 {
        return Err(Error::ParamOutOfRange(format!("formula graphs need s >= 3, got {s}")));
    }
    if k >= s {
        return Err(Error::ParamOutOfRange(format!("formula graphs need k < s, got k={k} s={s}")));
    }
    let padded = phi.padded_to(k)?;
    let n = padded.num_vars();
    let m = padded.num_clauses() as u32;

    let mut fg = FormulaGraph { s, k, num_vars: n, num_clauses: m, edges: Vec::new() };
    let mut edges = Vec::new();
    // Truth clique on T, F, X^1..X^{s-2}.
    for a in 0..s {
        for b in a + 1..s {
            edges.push((a, b));
        }
    }
    // Variable gadgets: a and abar adjacent, both adjacent to every X^j.
    for v in 0..n {
        let a = fg.literal_vertex(v, false);
        let abar = fg.literal_vertex(v, true);
        edges.push((a, abar));
        for j in 1..=s - 2 {
            edges.push((fg.x_vertex(j), a));
            edges.push((fg.x_vertex(j), abar));
        }
    }
    // Clause gadgets: clique on {T, c^{i,1..s-1}}, literal anchors for
    // j <= k, F-edges for j > k.
    for (i, clause) in padded.clauses().iter().enumerate() {
        let i = i as u32;
        for j in 1..=s - 1 {
            edges.push((fg.t_vertex(), fg.clause_vertex(i, j)));
            for j2 in j + 1..=s - 1 {
                edges.push((fg.clause_vertex(i, j), fg.clause_vertex(i, j2)));
            }
        }
        for j in 1..=k {
            let lit = clause[(j - 1) as usize];
            let anchor = fg.literal_vertex(lit.unsigned_abs() - 1, lit < 0);
            edges.push((fg.clause_vertex(i, j), anchor));
        }
        for j in k + 1..=s - 1 {
            edges.push((fg.clause_vertex(i, j), fg.f_vertex()));
        }
    }
    let mut edges: Vec<(Vertex, Vertex)> =
        edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    edges.sort_unstable();
    edges.dedup();
    fg.edges = edges;
    Ok(fg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::cnf::dpll_solve;
    use crate::graph::reduce;
    use crate::solvers::{exact_empire_colour, SolveStatus};

    #[test]
    fn single_clause_formula_size() {
        // (a1 or a2 or not a3) as a (5,3)-formula graph: 15 vertices.
        let phi = CnfFormula::new(3, vec![vec![1, 2, -3]]).unwrap();
        let fg = ksat_to_formula_graph(&phi, 5).unwrap();
        assert_eq!(fg.num_vertices(), 15);
        assert_eq!(fg.num_vertices(), 5 + 2 * 3 + 4);
        // Every c^{1,j} with j <= 3 has exactly one literal anchor; j = 4
        // attaches to F instead.
        for j in 1..=3 {
            assert!(fg.clause_literal_neighbour(0, j).is_some());
        }
        assert!(fg.clause_literal_neighbour(0, 4).is_none());
        assert!(fg.edges.contains(&(fg.f_vertex(), fg.clause_vertex(0, 4))));
        // The anchors are a1, a2, abar3.
        assert_eq!(fg.clause_literal_neighbour(0, 1), Some(fg.literal_vertex(0, false)));
        assert_eq!(fg.clause_literal_neighbour(0, 2), Some(fg.literal_vertex(1, false)));
        assert_eq!(fg.clause_literal_neighbour(0, 3), Some(fg.literal_vertex(2, true)));
    }

    #[test]
    fn colourable_iff_satisfiable_small() {
        let budget = Budget::default();
        // Deterministic mix of satisfiable and unsatisfiable formulas.
        let cases: Vec<(u32, Vec<Vec<i32>>)> = vec![
            (3, vec![vec![1, 2, -3]]),
            (2, vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]]), // UNSAT
            (3, vec![vec![1], vec![-1, 2], vec![-2, 3]]),
            (1, vec![vec![1], vec![-1]]), // UNSAT
            (4, vec![vec![1, -2, 3], vec![2, 3, 4], vec![-3, -4, 1], vec![-1, -2, -4]]),
        ];
        for (n, clauses) in cases {
            let phi = CnfFormula::new(n, clauses).unwrap().padded_to(3).unwrap();
            let sat = dpll_solve(&phi, &budget).is_sat();
            let fg = ksat_to_formula_graph(&phi, 4).unwrap();
            let res = exact_empire_colour(&fg.as_empire_graph(), 4, &budget);
            assert_eq!(res.status == SolveStatus::Colourable, sat, "{phi:?}");
        }
    }

    #[test]
    fn all_sign_patterns_over_three_vars_is_uncolourable() {
        // All 8 width-3 sign patterns: unsatisfiable.
        let mut clauses = Vec::new();
        for mask in 0..8 {
            clauses.push(
                (1..=3)
                    .map(|v| if mask >> (v - 1) & 1 == 1 { -v } else { v })
                    .collect(),
            );
        }
        let phi = CnfFormula::new(3, clauses).unwrap();
        let fg = ksat_to_formula_graph(&phi, 4).unwrap();
        let res = exact_empire_colour(&fg.as_empire_graph(), 4, &Budget::default());
        assert_eq!(res.status, SolveStatus::NotColourable);
    }

    #[test]
    fn truth_clique_spans_k_s() {
        let phi = CnfFormula::new(2, vec![vec![1, -2]]).unwrap();
        let fg = ksat_to_formula_graph(&phi, 4).unwrap();
        let rg = reduce(&fg.as_empire_graph());
        for a in 0..4u32 {
            for b in a + 1..4 {
                assert!(rg.are_adjacent(a, b));
            }
        }
    }

    #[test]
    fn parameter_validation() {
        let phi = CnfFormula::new(2, vec![vec![1, 2, 1]]).unwrap(); // k = 3
        assert!(ksat_to_formula_graph(&phi, 3).is_err()); // k >= s
        let phi2 = CnfFormula::new(1, vec![vec![1]]).unwrap();
        assert!(ksat_to_formula_graph(&phi2, 2).is_err()); // s < 3
    }
}
