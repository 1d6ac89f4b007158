//! Acceptance suite: one test per criterion, each printing a pass line
//! (visible with `cargo test --test acceptance -- --nocapture`). Every
//! tolerance is exact; decisions are cross-checked between independent
//! oracles throughout.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use empires::budget::Budget;
use empires::cnf::{dpll_solve, CnfFormula, SatResult};
use empires::colouring::{sparse_colour, ColourOutcome};
use empires::density::max_subgraph_avg_degree;
use empires::formula_graph::ksat_to_formula_graph;
use empires::gadgets::{
    build_a, build_b, build_b_minus, build_d, build_e, canonical_forced_pair,
    degree_distribution, roles, walecki, DegreeCounts, GadgetArtifact,
};
use empires::graph::{reduce, verify_colouring, EmpireGraph, InfeasibilityWitness};
use empires::planarity::is_planar;
use empires::reductions::{
    fg_to_lforest, fg_to_planar, fg_to_tree, pad_empires, sat3_to_lforest, sat3_to_tree, shape,
};
use empires::solvers::{
    enumerate_colourings, exact_empire_colour, for_each_colouring, reduced_to_cnf, SolveStatus,
};

fn budget() -> Budget {
    Budget::default()
}

/// Criterion 1: walecki(r) yields r edge-disjoint Hamiltonian cycles whose
/// union is E(K_{2r+1}), for all 1 <= r <= 50.
#[test]
fn acceptance_1_walecki_soundness() {
    let start = std::time::Instant::now();
    for r in 1..=50u32 {
        let d = walecki(r).unwrap();
        assert_eq!(d.cycles().len() as u32, r, "r={r}");
        assert!(d.is_valid_decomposition(), "r={r}");
    }
    assert!(start.elapsed().as_secs() < 5, "budget: {:?}", start.elapsed());
    println!("ACCEPTANCE 1 walecki soundness: PASS (r up to 50 in {:?})", start.elapsed());
}

/// Criterion 2: B_{r,s} admits an (s+1, r)-colouring and no (s, r)-colouring
/// for all 2 <= r <= 4, 2 <= s < 2r.
#[test]
fn acceptance_2_clique_gadget_chromatic_facts() {
    let start = std::time::Instant::now();
    let b = budget();
    let mut cases = 0;
    for r in 2..=4u32 {
        for s in 2..2 * r {
            let art = build_b(r, s).unwrap();
            let above = exact_empire_colour(&art.graph, s + 1, &b);
            assert_eq!(above.status, SolveStatus::Colourable, "B_{{{r},{s}}} at s+1");
            let (ok, _) = verify_colouring(&art.graph, above.colouring.as_ref().unwrap()).unwrap();
            assert!(ok);
            let below = exact_empire_colour(&art.graph, s, &b);
            assert_eq!(below.status, SolveStatus::NotColourable, "B_{{{r},{s}}} at s");
            cases += 1;
        }
    }
    assert!(start.elapsed().as_secs() < 30, "budget: {:?}", start.elapsed());
    println!("ACCEPTANCE 2 clique-gadget chromatic facts: PASS ({cases} cases in {:?})", start.elapsed());
}

/// Criterion 3: for r in {2,3}, s = 2r-1, every valid s-colouring of
/// reduce(B-) gives u and v one colour, and at least one exists.
#[test]
fn acceptance_3_b_minus_forcing() {
    let start = std::time::Instant::now();
    for r in [2u32, 3] {
        let s = 2 * r - 1;
        let (u, v) = canonical_forced_pair(r, s).unwrap();
        let art = build_b_minus(r, s, u, v).unwrap();
        let rg = reduce(&art.graph);
        let all = enumerate_colourings(&rg, s, None).unwrap();
        assert!(!all.is_empty(), "r={r}: no valid colouring");
        let forced = all.iter().filter(|c| c.colour_of(u) == c.colour_of(v)).count();
        assert_eq!(forced, all.len(), "r={r}: {forced}/{} forced", all.len());
    }
    assert!(start.elapsed().as_secs() < 10, "budget: {:?}", start.elapsed());
    println!("ACCEPTANCE 3 B- forcing: PASS (100% of solutions, both r, in {:?})", start.elapsed());
}

fn a_in_range(r: u32, s: u32) -> bool {
    let (ri, si) = (r as i64, s as i64);
    let d = 4 * ri + 3 - 2 * si;
    s >= 3 && d > 0 && 8 * ri + 1 < d * d
}

fn a_isolated_formula(r: u32, s: u32, t: u32) -> i64 {
    let q = 2 * r - (s - 1);
    let (r, s, q, t) = (r as i64, s as i64, q as i64, t as i64);
    if s % 2 == 1 {
        r - 1 + t * (q * r - (q + 1) * (s - 1) / 2)
    } else {
        let m = 0.max(q - s + 1);
        (q + 1) * (r - s / 2) + (t - 1) * (q * r - (q + 1) * (s - 1) / 2 - m / 2)
    }
}

/// The m that makes build_a use exactly depth t, or None when that depth is
/// unreachable (its isolated count stays below r, so the request would fall
/// back to the single-empire connector).
fn a_case_m(r: u32, s: u32, t: u32) -> Option<u32> {
    let hi = a_isolated_formula(r, s, t);
    if hi < r as i64 {
        return None;
    }
    Some(hi as u32)
}

/// Criterion 4: all proper s-colourings of E_{s,q,t} (up to 13 vertices)
/// make the qt+1 monochromatic vertices one colour; build_a's isolated
/// count equals the closed formula for in-range r <= 6, t <= 3, exactly.
#[test]
fn acceptance_4_e_a_monochromatic_forcing() {
    let start = std::time::Instant::now();
    let mut e_cases = 0;
    for s in 3..=12u32 {
        for q in 1..=12u32 {
            if q * q < s - 1 {
                continue;
            }
            for t in 1..=4u32 {
                if (s + q - 1) * t + 1 > 13 {
                    break;
                }
                let art = build_e(s, q, t).unwrap();
                let mono: Vec<u32> = art.role(roles::MONO).to_vec();
                assert_eq!(mono.len() as u32, q * t + 1, "E1 count {s},{q},{t}");
                let rg = reduce(&art.graph);
                let mut total = 0u64;
                let mut all_mono = true;
                for_each_colouring(&rg, s, |c| {
                    total += 1;
                    let first = c[mono[0] as usize];
                    if !mono.iter().all(|&m| c[m as usize] == first) {
                        all_mono = false;
                        return false;
                    }
                    true
                });
                assert!(total > 0, "E_{{{s},{q},{t}}} has no proper colouring");
                assert!(all_mono, "E_{{{s},{q},{t}}} monochromatic set split");
                e_cases += 1;
            }
        }
    }

    let mut a_cases = 0;
    for r in 2..=6u32 {
        for s in 3..2 * r {
            if !a_in_range(r, s) {
                continue;
            }
            for t in 1..=3u32 {
                let Some(m) = a_case_m(r, s, t) else { continue };
                let art = build_a(r, s, m).unwrap();
                let z = art.role(roles::Z);
                assert_eq!(z.len() as i64, m as i64, "isolated count r={r} s={s} t={t}");
                assert_eq!(z.len() as i64, a_isolated_formula(r, s, t));
                let adj = art.graph.adjacency();
                assert!(z.iter().all(|&v| adj[v as usize].is_empty()));
                a_cases += 1;
            }
        }
    }
    assert!(start.elapsed().as_secs() < 60, "budget: {:?}", start.elapsed());
    println!(
        "ACCEPTANCE 4 E/A monochromatic forcing: PASS ({e_cases} E cases, {a_cases} A cases, zero tolerance, in {:?})",
        start.elapsed()
    );
}

/// Criterion 5: build_a degree distributions match the per-class tables
/// row for row, r <= 6 in range, t up to 3.
#[test]
fn acceptance_5_degree_tables() {
    let start = std::time::Instant::now();
    let mut rows = 0;
    for r in 2..=6u32 {
        for s in 3..2 * r {
            if !a_in_range(r, s) {
                continue;
            }
            let q = 2 * r - (s - 1);
            for t in 1..=3u32 {
                let Some(m) = a_case_m(r, s, t) else { continue };
                let art = build_a(r, s, m).unwrap();
                let table = degree_distribution(&art).unwrap();
                let ctx = format!("r={r} s={s} t={t}");

                let plug_expect = if s % 2 == 1 {
                    DegreeCounts { deg2: (s - 1) / 2 - 1, deg1: 2, deg0: r - (s - 1) / 2 - 1 }
                } else {
                    DegreeCounts { deg2: s / 2 - 1, deg1: 1, deg0: r - s / 2 }
                };
                assert_eq!(table.plug, Some(plug_expect), "plug row {ctx}");
                rows += 1;

                for (i, w) in table.constraining.iter().enumerate() {
                    assert_eq!(*w, DegreeCounts { deg2: r, deg1: 0, deg0: 0 }, "w row {i} {ctx}");
                }
                rows += table.constraining.len();

                let sock_expect = if s % 2 == 1 {
                    DegreeCounts { deg2: (s - 1) / 2, deg1: 0, deg0: r - (s - 1) / 2 }
                } else {
                    DegreeCounts { deg2: s / 2 - 1, deg1: 1, deg0: r - s / 2 }
                };
                for (i, u) in table.sockets.iter().enumerate() {
                    assert_eq!(*u, sock_expect, "socket row {i} {ctx}");
                }
                rows += table.sockets.len();

                assert_eq!(table.internal_groups.len() as u32, t - 1, "{ctx}");
                let group_expect = if s % 2 == 1 {
                    DegreeCounts {
                        deg2: (q + 1) * (s - 1) / 2,
                        deg1: 0,
                        deg0: q * r - (q + 1) * (s - 1) / 2,
                    }
                } else {
                    let m_ug = q.saturating_sub(s - 1);
                    let deg2 = ((q + 1) * (s - 1) - m_ug) / 2;
                    DegreeCounts { deg2, deg1: m_ug, deg0: q * r - deg2 - m_ug }
                };
                for (i, g) in table.internal_groups.iter().enumerate() {
                    assert_eq!(*g, group_expect, "internal group {i} {ctx}");
                }
                rows += table.internal_groups.len();
            }
        }
    }
    println!("ACCEPTANCE 5 degree tables: PASS ({rows} rows exact, in {:?})", start.elapsed());
}

/// Deterministic random graph inside SPARSE(sigma), with empires of size r.
fn random_sparse_instance(rng: &mut ChaCha8Rng, r: u32, sigma: Ratio<i64>) -> EmpireGraph {
    let k = rng.gen_range(3..=7u32); // empires
    let n = r * k;
    let target = ((sigma * Ratio::from_integer(n as i64)).to_integer() / 2).max(0) as usize;
    let mut edges = BTreeSet::new();
    for _ in 0..2 * target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
        if edges.len() >= target {
            break;
        }
    }
    let mut edges: Vec<(u32, u32)> = edges.into_iter().collect();
    // Trim until no induced subgraph is denser than sigma.
    while !edges.is_empty() && max_subgraph_avg_degree(n, &edges).unwrap() > sigma {
        let idx = rng.gen_range(0..edges.len());
        edges.swap_remove(idx);
    }
    edges.sort_unstable();
    // Random empire partition.
    let mut verts: Vec<u32> = (0..n).collect();
    for i in (1..verts.len()).rev() {
        let j = rng.gen_range(0..=i);
        verts.swap(i, j);
    }
    let mut empire_of = vec![0u32; n as usize];
    for (i, &v) in verts.iter().enumerate() {
        empire_of[v as usize] = i as u32 / r;
    }
    EmpireGraph::new_strict(r, empire_of, edges).unwrap()
}

/// Criterion 6: on 500 random graphs in SPARSE(sigma), sparse_colour
/// either colours within r*sigma colours or produces a valid clique or odd
/// cycle witness, and its decision agrees with the exact solver.
#[test]
fn acceptance_6_sparse_colouring_agreement() {
    let start = std::time::Instant::now();
    let b = budget();
    let mut rng = ChaCha8Rng::seed_from_u64(0xE3A1);
    let mut count = 0;
    let combos = [(2u32, 2i64), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)];
    'outer: loop {
        for &(r, s) in &combos {
            let sigma = Ratio::new(s, r as i64);
            let g = random_sparse_instance(&mut rng, r, sigma);
            assert!(max_subgraph_avg_degree(g.num_vertices(), g.edges()).unwrap() <= sigma);
            let outcome = sparse_colour(&g, sigma).unwrap();
            let exact = exact_empire_colour(&g, s as u32, &b);
            match outcome {
                ColourOutcome::Coloured(c) => {
                    let (ok, _) = verify_colouring(&g, &c).unwrap();
                    assert!(ok, "case {count}");
                    assert!(c.colours_used() <= s as u32, "case {count}");
                    assert_eq!(exact.status, SolveStatus::Colourable, "case {count}");
                }
                ColourOutcome::Infeasible(w) => {
                    assert_eq!(exact.status, SolveStatus::NotColourable, "case {count}");
                    let rg = reduce(&g);
                    match w {
                        InfeasibilityWitness::CliqueFound(vs) => {
                            assert_eq!(vs.len() as i64, s + 1, "case {count}");
                            for (i, &a) in vs.iter().enumerate() {
                                for &bv in &vs[i + 1..] {
                                    assert!(rg.are_adjacent(a, bv), "case {count}");
                                }
                            }
                        }
                        InfeasibilityWitness::OddCycleFound(vs) => {
                            assert_eq!(s, 2, "case {count}");
                            assert_eq!(vs.len() % 2, 1, "case {count}");
                            for i in 0..vs.len() {
                                assert!(rg.are_adjacent(vs[i], vs[(i + 1) % vs.len()]), "case {count}");
                            }
                        }
                        InfeasibilityWitness::ExhaustedSearch(_) => {
                            panic!("exhausted search inside SPARSE(sigma), case {count}")
                        }
                    }
                }
            }
            count += 1;
            if count >= 500 {
                break 'outer;
            }
        }
    }
    assert!(start.elapsed().as_secs() < 120, "budget: {:?}", start.elapsed());
    println!("ACCEPTANCE 6 sparse colouring: PASS (500 instances, 100% agreement, in {:?})", start.elapsed());
}

/// The shared 200-formula corpus: widths up to 3, n <= 5 variables,
/// m <= 6 clauses, a mix of satisfiable and unsatisfiable instances.
fn formula_corpus() -> Vec<(CnfFormula, bool)> {
    let b = budget();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut corpus = Vec::new();
    for i in 0..200 {
        let tight = i % 3 == 0;
        let n = if tight { rng.gen_range(2..=3u32) } else { rng.gen_range(3..=5u32) };
        let m = if tight { rng.gen_range(4..=6usize) } else { rng.gen_range(1..=6usize) };
        let mut clauses = Vec::new();
        for _ in 0..m {
            let width = if tight { rng.gen_range(1..=2) } else { rng.gen_range(1..=3) };
            let mut cl = Vec::new();
            for _ in 0..width {
                let v = rng.gen_range(1..=n) as i32;
                cl.push(if rng.gen_bool(0.5) { v } else { -v });
            }
            clauses.push(cl);
        }
        let phi = CnfFormula::new(n, clauses).unwrap().padded_to(3).unwrap();
        let sat = match dpll_solve(&phi, &b) {
            SatResult::Sat(_) => true,
            SatResult::Unsat => false,
            SatResult::Timeout => panic!("corpus formula timed out"),
        };
        corpus.push((phi, sat));
    }
    let unsat = corpus.iter().filter(|(_, s)| !s).count();
    assert!((30..=170).contains(&unsat), "corpus mix: {unsat} unsat of 200");
    corpus
}

fn decide(g: &EmpireGraph, s: u32) -> bool {
    match exact_empire_colour(g, s, &budget()).status {
        SolveStatus::Colourable => true,
        SolveStatus::NotColourable => false,
        SolveStatus::Timeout => panic!("exact solver exceeded its budget"),
    }
}

/// Criterion 7: satisfiable iff (s, r)-colourable across every pipeline on
/// the 200-formula corpus, decided by the exact solver.
#[test]
fn acceptance_7_reduction_round_trips() {
    let start = std::time::Instant::now();
    let corpus = formula_corpus();
    let mut checks = 0usize;
    for (i, (phi, sat)) in corpus.iter().enumerate() {
        for r in [2u32, 3] {
            let art = sat3_to_lforest(phi, r).unwrap();
            assert_eq!(decide(&art.graph, 3), *sat, "sat3_to_lforest r={r}, formula {i}");
            checks += 1;
        }
        let tree = sat3_to_tree(phi).unwrap();
        let padded = pad_empires(&tree.graph, 3).unwrap();
        assert_eq!(decide(&padded, 3), *sat, "sat3_to_tree padded, formula {i}");
        checks += 1;

        let fg = ksat_to_formula_graph(phi, 4).unwrap();
        let lf = fg_to_lforest(&fg, 7).unwrap();
        assert_eq!(decide(&lf.graph, 4), *sat, "fg_to_lforest, formula {i}");
        let ft = fg_to_tree(&fg, 3, 4).unwrap();
        assert_eq!(decide(&ft.graph, 4), *sat, "fg_to_tree, formula {i}");
        let fp = fg_to_planar(&fg, 2, 4, &budget()).unwrap();
        assert_eq!(decide(&fp.graph, 4), *sat, "fg_to_planar, formula {i}");
        checks += 3;
    }
    assert!(start.elapsed().as_secs() < 600, "budget: {:?}", start.elapsed());
    println!(
        "ACCEPTANCE 7 reduction round trips: PASS ({checks} pipeline decisions, 100% agreement, in {:?})",
        start.elapsed()
    );
}

/// Criterion 8: structural guarantees - linear forests have max degree 2
/// and no cycles, trees are connected and acyclic, planar outputs pass the
/// planarity test, and D_{2,s} satisfies D0-D3 for s <= 6.
#[test]
fn acceptance_8_shape_guarantees() {
    let start = std::time::Instant::now();
    let corpus: Vec<_> = formula_corpus().into_iter().take(40).collect();
    for (i, (phi, _)) in corpus.iter().enumerate() {
        for r in [2u32, 3] {
            let art = sat3_to_lforest(phi, r).unwrap();
            assert!(shape::is_linear_forest(&art.graph), "lforest shape, formula {i} r={r}");
        }
        let tree = sat3_to_tree(phi).unwrap();
        assert!(shape::is_tree(&tree.graph), "tree shape, formula {i}");
        assert!(shape::is_tree(&pad_empires(&tree.graph, 3).unwrap()), "padded tree, formula {i}");

        let fg = ksat_to_formula_graph(phi, 4).unwrap();
        let lf = fg_to_lforest(&fg, 7).unwrap();
        assert!(shape::is_linear_forest(&lf.graph), "fg lforest shape, formula {i}");
        let ft = fg_to_tree(&fg, 3, 4).unwrap();
        assert!(shape::is_tree(&ft.graph), "fg tree shape, formula {i}");
        let fp = fg_to_planar(&fg, 2, 4, &budget()).unwrap();
        assert!(shape::is_componentwise_planar(&fp.graph), "fg planar shape, formula {i}");
    }

    // D_{2,s} conditions for s <= 6.
    for s in 2..=6u32 {
        let art = build_d(2, s, 0, 1, &budget()).unwrap();
        assert_d_conditions(&art, 2, s, 0, 1);
    }
    println!("ACCEPTANCE 8 shape guarantees: PASS (100% on 40-formula sample + D_2 sweep, in {:?})", start.elapsed());
}

fn assert_d_conditions(art: &GadgetArtifact, r: u32, s: u32, u: u32, v: u32) {
    let g = &art.graph;
    assert_eq!(g.num_vertices(), r * (s + 1), "D0");
    assert_eq!(g.num_empires(), s + 1, "D0");
    assert!(g.is_strict(), "D0");
    let v1 = g.empire_vertices(v)[0];
    assert!(g.edges().iter().all(|&(a, b)| a != v1 && b != v1), "D1");
    let adj = g.adjacency();
    let mut seen = vec![false; g.num_vertices() as usize];
    for start in 0..g.num_vertices() {
        if seen[start as usize] {
            continue;
        }
        let mut comp = vec![start];
        seen[start as usize] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &w in &adj[x as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        let empires: BTreeSet<u32> = comp.iter().map(|&x| g.empire_of(x)).collect();
        assert_eq!(empires.len(), comp.len(), "D2");
    }
    assert!(is_planar(g.num_vertices(), g.edges()), "component planarity");
    let rg = reduce(g);
    for a in 0..=s {
        for bb in a + 1..=s {
            let expect = (a, bb) != (u.min(v), u.max(v));
            assert_eq!(rg.are_adjacent(a, bb), expect, "D3 at ({a},{bb})");
        }
    }
}

/// Criterion 9: the backtracking solver and the CNF-encoding-plus-DPLL
/// route agree on 300 random instances with up to 12 empires, s <= 6.
#[test]
fn acceptance_9_oracle_agreement() {
    let start = std::time::Instant::now();
    let b = budget();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    for case in 0..300 {
        let n = rng.gen_range(2..=12u32);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.4) {
                    edges.push((u, v));
                }
            }
        }
        let g = EmpireGraph::new(1, (0..n).collect(), edges).unwrap();
        let s = rng.gen_range(1..=6u32);
        let exact = decide(&g, s);
        let via_cnf = match dpll_solve(&reduced_to_cnf(&reduce(&g), s).unwrap(), &b) {
            SatResult::Sat(_) => true,
            SatResult::Unsat => false,
            SatResult::Timeout => panic!("dpll timed out on case {case}"),
        };
        assert_eq!(exact, via_cnf, "case {case} (n={n}, s={s})");
        // Third route: exhaustive enumeration finds a colouring iff one exists.
        if n <= 9 {
            let any = for_each_colouring(&reduce(&g), s, |_| false) > 0;
            assert_eq!(exact, any, "enumeration route, case {case}");
        }
    }
    println!("ACCEPTANCE 9 oracle agreement: PASS (300 instances, 100%, in {:?})", start.elapsed());
}

/// Criterion 10: the formula graph has exactly s + 2n + m(s-1) vertices on
/// every corpus input.
#[test]
fn acceptance_10_formula_graph_size() {
    let start = std::time::Instant::now();
    let corpus = formula_corpus();
    for (i, (phi, _)) in corpus.iter().enumerate() {
        for s in [4u32, 5, 6] {
            let fg = ksat_to_formula_graph(phi, s).unwrap();
            let expected = s + 2 * phi.num_vars() + phi.num_clauses() as u32 * (s - 1);
            assert_eq!(fg.num_vertices(), expected, "formula {i}, s={s}");
            assert_eq!(fg.as_empire_graph().num_vertices(), expected, "formula {i}, s={s}");
        }
    }
    println!("ACCEPTANCE 10 formula-graph size: PASS (200 formulas x 3 palettes, exact, in {:?})", start.elapsed());
}
