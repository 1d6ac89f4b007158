//! Reduction pipelines: 3-CNF to linear forests and trees, formula graphs
//! to linear forests, trees and planar empire graphs, and the leaf-padding
//! step that grows empire sizes on trees.
//!
//! Shared empires are realized by index-aligned identification: a gadget
//! copy whose empire is mapped onto an existing one re-uses that empire's
//! vertices (k-th copy vertex onto k-th global vertex), which attaches each
//! copy component at a single vertex and keeps trees trees.

use crate::budget::Budget;
use crate::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::formula_graph::FormulaGraph;
use crate::gadgets::{
    self, build_a, build_b, build_b_minus, build_b_plus, build_d, canonical_forced_pair,
    linearize_with_budget, planar_decompose_k, roles, GadgetArtifact, RoleMap,
};
use crate::graph::{Empire, EmpireGraph, Vertex};

/// Builds empire graphs empire by empire; all empires carry exactly `r`
/// vertices created up front.
struct Assembler {
    r: u32,
    empire_count: u32,
    edges: Vec<(Vertex, Vertex)>,
    roles: RoleMap,
}

impl Assembler {
    fn new(r: u32) -> Self {
        Assembler { r, empire_count: 0, edges: Vec::new(), roles: RoleMap::new() }
    }

    fn add_empire(&mut self) -> Empire {
        self.empire_count += 1;
        self.empire_count - 1
    }

    fn add_empires(&mut self, count: u32) -> Vec<Empire> {
        (0..count).map(|_| self.add_empire()).collect()
    }

    /// The k-th vertex of an empire.
    fn vertex(&self, e: Empire, k: u32) -> Vertex {
        debug_assert!(e < self.empire_count && k < self.r);
        e * self.r + k
    }

    fn add_edge(&mut self, a: Vertex, b: Vertex) {
        self.edges.push((a, b));
    }

    /// Copies a gadget in, mapping gadget empire i onto `mapping[i]`.
    /// Gadget vertex k of an empire lands on global vertex k; gadget empire
    /// sizes may be below r (the spare vertices simply stay isolated).
    fn instantiate(&mut self, gadget: &EmpireGraph, mapping: &[Empire]) {
        debug_assert_eq!(mapping.len() as u32, gadget.num_empires());
        let index_of = index_within_empire(gadget);
        for &(x, y) in gadget.edges() {
            let gx = self.vertex(mapping[gadget.empire_of(x) as usize], index_of[x as usize]);
            let gy = self.vertex(mapping[gadget.empire_of(y) as usize], index_of[y as usize]);
            self.add_edge(gx, gy);
        }
    }

    fn tag(&mut self, tag: impl Into<String>, ids: Vec<u32>) {
        self.roles.insert(tag.into(), ids);
    }

    fn finish(self) -> Result<GadgetArtifact> {
        let empire_of: Vec<Empire> = (0..self.empire_count * self.r).map(|v| v / self.r).collect();
        let graph = EmpireGraph::new_strict(self.r, empire_of, self.edges)?;
        Ok(GadgetArtifact { graph, roles: self.roles })
    }
}

/// For each vertex, its position within its empire's ascending vertex list.
fn index_within_empire(g: &EmpireGraph) -> Vec<u32> {
    let mut next = vec![0u32; g.num_empires() as usize];
    (0..g.num_vertices())
        .map(|x| {
            let e = g.empire_of(x) as usize;
            let k = next[e];
            next[e] = k + 1;
            k
        })
        .collect()
}

fn padded_3cnf(phi: &CnfFormula) -> Result<CnfFormula> {
    if phi.k() > 3 {
        return Err(Error::InvalidInput(format!("expected 3-CNF, widest clause is {}", phi.k())));
    }
    phi.padded_to(3)
}

/// Literal occurrence counts over the padded clauses, positive then negative
/// per variable.
fn occurrences(phi: &CnfFormula) -> Vec<(u32, u32)> {
    let mut occ = vec![(0u32, 0u32); phi.num_vars() as usize];
    for cl in phi.clauses() {
        for &lit in cl {
            let v = (lit.unsigned_abs() - 1) as usize;
            if lit > 0 {
                occ[v].0 += 1;
            } else {
                occ[v].1 += 1;
            }
        }
    }
    occ
}

/// The clause widget on five fresh empires (two OR stages feeding a check
/// against the truth empire): returns the
/// reduced-level pattern as vertex pairs given the anchor vertices. `cv` is
/// indexed cv[j][k] = vertex k of clause empire j+1.
fn clause_widget_edges(
    t1: Vertex,
    t2: Vertex,
    lit1: Vertex,
    lit2: Vertex,
    lit3: Vertex,
    cv: &[Vec<Vertex>; 5],
) -> Vec<(Vertex, Vertex)> {
    vec![
        (t1, cv[0][0]),
        (t2, cv[1][0]),
        (cv[0][0], cv[2][0]),
        (cv[1][0], cv[0][1]),
        (cv[2][0], cv[3][0]),
        (cv[3][0], cv[4][0]),
        (cv[4][0], cv[2][1]),
        (cv[3][1], lit1),
        (cv[4][1], lit2),
        (cv[1][1], lit3),
    ]
}

/// 3-SAT to a (3, r)-colourable-iff-satisfiable linear forest (r >= 2).
///
/// Truth gadget: B_{2,2} grown to empires of size r, with T and X swapped
/// for connectors sized for the clause and variable wiring. Each variable
/// contributes two connectors tied through a monochromatic vertex of the X
/// connector; each clause contributes the five-empire widget.
pub fn sat3_to_lforest(phi: &CnfFormula, r: u32) -> Result<GadgetArtifact> {
    if r < 2 {
        return Err(Error::ParamOutOfRange("sat3_to_lforest needs r >= 2".into()));
    }
    let phi = padded_3cnf(phi)?;
    let n = phi.num_vars();
    let m = phi.num_clauses() as u32;
    let occ = occurrences(&phi);

    // B_{2,2} on empires T=0, F=1, X=2, each padded to r vertices.
    let b22 = build_b(2, 2)?;
    let index_of = index_within_empire(&b22.graph);
    let edges: Vec<(Vertex, Vertex)> = b22
        .graph
        .edges()
        .iter()
        .map(|&(x, y)| {
            (
                b22.graph.empire_of(x) * r + index_of[x as usize],
                b22.graph.empire_of(y) * r + index_of[y as usize],
            )
        })
        .collect();
    let empire_of: Vec<Empire> = (0..3 * r).map(|v| v / r).collect();
    let g0 = EmpireGraph::new_strict(r, empire_of, edges)?;

    // Linearize T (budget: two monochromatic vertices per clause), then X
    // (budget: one per variable).
    let (g1, info_t) = linearize_with_budget(&g0, 0, r, 3, 2 * m)?;
    let x_now = info_t.empire_remap[2].expect("X survives");
    let (g2, info_x) = linearize_with_budget(&g1, x_now, r, 3, n)?;
    let t_free: Vec<Vertex> = info_t
        .free_z
        .iter()
        .map(|&z| info_x.vertex_remap[z as usize].expect("connector vertices survive"))
        .collect();
    let x_free: Vec<Vertex> = info_x.free_z.clone();
    let t_mono: Vec<Empire> = info_t
        .mono_empires
        .iter()
        .map(|&e| info_x.empire_remap[e as usize].expect("connector empires survive"))
        .collect();
    let f_empire = info_x.empire_remap
        [info_t.empire_remap[1].expect("F survives") as usize]
        .expect("F survives");

    // Grow the graph with variable and clause machinery.
    let mut empire_of = g2.empire_map().to_vec();
    let mut edges = g2.edges().to_vec();
    let mut next_empire = g2.num_empires();
    let mut next_vertex = g2.num_vertices();
    let mut append_connector = |art: &GadgetArtifact,
                                empire_of: &mut Vec<Empire>,
                                edges: &mut Vec<(Vertex, Vertex)>|
     -> (Vec<Vertex>, Vec<Empire>) {
        let (e_base, v_base) = (next_empire, next_vertex);
        for x in 0..art.graph.num_vertices() {
            empire_of.push(e_base + art.graph.empire_of(x));
        }
        for &(x, y) in art.graph.edges() {
            edges.push((v_base + x, v_base + y));
        }
        next_empire += art.graph.num_empires();
        next_vertex += art.graph.num_vertices();
        let z = art.role(roles::Z).iter().map(|&x| v_base + x).collect();
        let mono = art.role(roles::MONO).iter().map(|&e| e_base + e).collect();
        (z, mono)
    };

    // Variable gadgets.
    let mut lit_free: Vec<(Vec<Vertex>, Vec<Vertex>)> = Vec::new();
    let mut var_mono: Vec<(Vec<Empire>, Vec<Empire>)> = Vec::new();
    for v in 0..n as usize {
        let a = build_a(r, 3, occ[v].0 + 2)?;
        let (z_a, mono_a) = append_connector(&a, &mut empire_of, &mut edges);
        let abar = build_a(r, 3, occ[v].1 + 2)?;
        let (z_abar, mono_abar) = append_connector(&abar, &mut empire_of, &mut edges);
        let z = x_free[v];
        edges.push((z, z_a[0]));
        edges.push((z, z_abar[0]));
        edges.push((z_a[1], z_abar[1]));
        lit_free.push((z_a[2..].to_vec(), z_abar[2..].to_vec()));
        var_mono.push((mono_a, mono_abar));
    }

    // Clause widgets.
    let mut lit_used = vec![(0usize, 0usize); n as usize];
    for (i, clause) in phi.clauses().iter().enumerate() {
        let mut anchors = Vec::with_capacity(3);
        for &lit in clause {
            let v = (lit.unsigned_abs() - 1) as usize;
            let pool = if lit > 0 {
                let k = lit_used[v].0;
                lit_used[v].0 += 1;
                lit_free[v].0[k]
            } else {
                let k = lit_used[v].1;
                lit_used[v].1 += 1;
                lit_free[v].1[k]
            };
            anchors.push(pool);
        }
        let cv: [Vec<Vertex>; 5] = std::array::from_fn(|_| {
            let e = next_empire;
            next_empire += 1;
            let vs: Vec<Vertex> = (0..r).map(|k| next_vertex + k).collect();
            next_vertex += r;
            for _ in 0..r {
                empire_of.push(e);
            }
            vs
        });
        let t1 = t_free[2 * i];
        let t2 = t_free[2 * i + 1];
        edges.extend(clause_widget_edges(t1, t2, anchors[0], anchors[1], anchors[2], &cv));
    }

    let graph = EmpireGraph::new_strict(r, empire_of, edges)?;
    let mut role_map = RoleMap::new();
    role_map.insert(roles::T.into(), t_mono);
    role_map.insert(roles::F.into(), vec![f_empire]);
    role_map.insert(roles::x(1), info_x.mono_empires.clone());
    for (v, (mono_a, mono_abar)) in var_mono.iter().enumerate() {
        role_map.insert(format!("a{v}"), mono_a.clone());
        role_map.insert(format!("na{v}"), mono_abar.clone());
    }
    Ok(GadgetArtifact { graph, roles: role_map })
}

/// 3-SAT to a (3, 2)-colourable-iff-satisfiable tree.
///
/// Truth gadget B+_{2,2}(T); per variable a copy of B_{2,2} on a, abar and
/// the shared X empire; per clause the five-empire widget anchored directly
/// on T's two vertices and the literal empires' first vertices.
pub fn sat3_to_tree(phi: &CnfFormula) -> Result<GadgetArtifact> {
    let r = 2u32;
    let phi = padded_3cnf(phi)?;
    let mut asm = Assembler::new(r);
    let t = asm.add_empire();
    let f = asm.add_empire();
    let x = asm.add_empire();
    let bplus = build_b_plus(2, 2, 0)?;
    asm.instantiate(&bplus.graph, &[t, f, x]);

    let b22 = build_b(2, 2)?;
    let mut lit_empires: Vec<(Empire, Empire)> = Vec::new();
    for _ in 0..phi.num_vars() {
        let a = asm.add_empire();
        let abar = asm.add_empire();
        asm.instantiate(&b22.graph, &[a, abar, x]);
        lit_empires.push((a, abar));
    }

    for clause in phi.clauses() {
        let cs = asm.add_empires(5);
        let cv: [Vec<Vertex>; 5] =
            std::array::from_fn(|j| (0..r).map(|k| asm.vertex(cs[j], k)).collect());
        let anchor = |lit: i32, asm: &Assembler| {
            let (a, abar) = lit_empires[(lit.unsigned_abs() - 1) as usize];
            asm.vertex(if lit > 0 { a } else { abar }, 0)
        };
        let (l1, l2, l3) = (
            anchor(clause[0], &asm),
            anchor(clause[1], &asm),
            anchor(clause[2], &asm),
        );
        let t1 = asm.vertex(t, 0);
        let t2 = asm.vertex(t, 1);
        for e in clause_widget_edges(t1, t2, l1, l2, l3, &cv) {
            asm.add_edge(e.0, e.1);
        }
    }

    asm.tag(roles::T, vec![t]);
    asm.tag(roles::F, vec![f]);
    asm.tag(roles::x(1), vec![x]);
    for (v, &(a, abar)) in lit_empires.iter().enumerate() {
        asm.tag(format!("a{v}"), vec![a]);
        asm.tag(format!("na{v}"), vec![abar]);
    }
    asm.finish()
}

/// Grows every empire of a tree (or forest) from `r_from` to `r_to` vertices
/// by hanging fresh leaves off each empire's first vertex; colourability is
/// untouched because the new edges are intra-empire.
pub fn pad_empires(g: &EmpireGraph, r_to: u32) -> Result<EmpireGraph> {
    let r_from = g.r();
    if r_to <= r_from {
        return Err(Error::ParamOutOfRange(format!("r_to = {r_to} must exceed r = {r_from}")));
    }
    if !g.is_strict() {
        return Err(Error::InvalidInput("pad_empires expects empires of exactly r vertices".into()));
    }
    let mut empire_of = g.empire_map().to_vec();
    let mut edges = g.edges().to_vec();
    let mut next = g.num_vertices();
    for e in 0..g.num_empires() {
        let anchor = g.empire_vertices(e)[0];
        for _ in r_from..r_to {
            empire_of.push(e);
            edges.push((anchor, next));
            next += 1;
        }
    }
    EmpireGraph::new_strict(r_to, empire_of, edges)
}

fn check_fg(fg: &FormulaGraph, s: u32) -> Result<()> {
    if fg.s != s {
        return Err(Error::InvalidInput(format!("formula graph has s = {}, expected {s}", fg.s)));
    }
    if fg.k != s - 1 {
        return Err(Error::InvalidInput(format!(
            "reduction expects FG(s, s-1); got k = {} for s = {s}",
            fg.k
        )));
    }
    Ok(())
}

/// Formula graph to linear forest: every vertex is linearized into a
/// connector sized by its degree, edges re-attached between monochromatic
/// vertices (r >= 3, 3 < s below the connector bound).
pub fn fg_to_lforest(fg: &FormulaGraph, r: u32) -> Result<GadgetArtifact> {
    let s = fg.s;
    if r < 3 {
        return Err(Error::ParamOutOfRange("fg_to_lforest needs r >= 3".into()));
    }
    if s <= 3 {
        return Err(Error::ParamOutOfRange("fg_to_lforest needs s > 3".into()));
    }
    check_fg(fg, s)?;
    let total = fg.num_vertices();
    let mut g = fg.as_empire_graph();
    // Original vertices always occupy the lowest empire ids: each step
    // removes id 0 and appends the connector's empires at the top.
    let mut mono_of: Vec<Vec<Empire>> = Vec::new();
    for _ in 0..total {
        let (next, info) = linearize_with_budget(&g, 0, r, s, 0)?;
        for m in &mut mono_of {
            for e in m.iter_mut() {
                *e = info.empire_remap[*e as usize].expect("connector empires survive");
            }
        }
        mono_of.push(info.mono_empires.clone());
        g = next;
    }
    let mut role_map = RoleMap::new();
    role_map.insert(roles::T.into(), mono_of[fg.t_vertex() as usize].clone());
    role_map.insert(roles::F.into(), mono_of[fg.f_vertex() as usize].clone());
    for i in 1..=s - 2 {
        role_map.insert(roles::x(i), mono_of[fg.x_vertex(i) as usize].clone());
    }
    for v in 0..fg.num_vars {
        role_map.insert(format!("a{v}"), mono_of[fg.literal_vertex(v, false) as usize].clone());
        role_map.insert(format!("na{v}"), mono_of[fg.literal_vertex(v, true) as usize].clone());
    }
    for i in 0..fg.num_clauses {
        for j in 1..=s - 1 {
            role_map.insert(
                format!("c{i}_{j}"),
                mono_of[fg.clause_vertex(i, j) as usize].clone(),
            );
        }
    }
    Ok(GadgetArtifact { graph: g, roles: role_map })
}

/// Formula graph to a single tree (r >= 3, 3 < s < 2r): the truth clique
/// becomes B+_{r,s-1}(T), literal exclusions route through colour
/// constraining gadgets B-_{r,s}(W, X^i), clause cliques become B_{r,s-1}
/// copies sharing T, their literal edges route through B-_{r,s}(b, c).
pub fn fg_to_tree(fg: &FormulaGraph, r: u32, s: u32) -> Result<GadgetArtifact> {
    if r < 3 || s <= 3 || s >= 2 * r {
        return Err(Error::ParamOutOfRange(format!(
            "fg_to_tree needs r >= 3 and 3 < s < 2r, got r={r} s={s}"
        )));
    }
    check_fg(fg, s)?;

    let bplus = build_b_plus(r, s - 1, 0)?;
    let (cu, cv) = canonical_forced_pair(r, s)?;
    let bminus = build_b_minus(r, s, cu, cv)?;
    let iso = gadgets_bminus_iso_index(&bminus);
    let bclause = build_b(r, s - 1)?;

    let mut asm = Assembler::new(r);
    // Truth empires: T, F, X^1..X^{s-2}.
    let truth = asm.add_empires(s);
    asm.instantiate(&bplus.graph, &truth);
    let t = truth[0];
    let x = |i: u32| truth[(1 + i) as usize];

    // B- instantiation: u -> fresh forced empire, v -> shared empire.
    let instantiate_bminus = |asm: &mut Assembler, shared: Empire| -> Empire {
        let fresh = asm.add_empire();
        let mut mapping = vec![u32::MAX; (s + 1) as usize];
        mapping[cu as usize] = fresh;
        mapping[cv as usize] = shared;
        for e in 0..=s {
            if e != cu && e != cv {
                mapping[e as usize] = asm.add_empire();
            }
        }
        asm.instantiate(&bminus.graph, &mapping);
        fresh
    };

    // Variable gadgets.
    let mut lit_empires: Vec<(Empire, Empire)> = Vec::new();
    for v in 0..fg.num_vars {
        let a = asm.add_empire();
        let abar = asm.add_empire();
        for k in 1..r {
            asm.add_edge(asm.vertex(a, 0), asm.vertex(a, k));
            asm.add_edge(asm.vertex(abar, 0), asm.vertex(abar, k));
        }
        asm.add_edge(asm.vertex(a, 0), asm.vertex(abar, 0));
        asm.add_edge(asm.vertex(a, 0), asm.vertex(x(1), 0));
        for i in 1..=s - 2 {
            if i >= 2 {
                let w = instantiate_bminus(&mut asm, x(i));
                let wv = asm.vertex(w, iso);
                asm.add_edge(wv, asm.vertex(a, 0));
                asm.tag(format!("W{i}_a{v}"), vec![w]);
            }
            let w = instantiate_bminus(&mut asm, x(i));
            let wv = asm.vertex(w, iso);
            asm.add_edge(wv, asm.vertex(abar, 0));
            asm.tag(format!("W{i}_na{v}"), vec![w]);
        }
        lit_empires.push((a, abar));
    }

    // Clause gadgets.
    for i in 0..fg.num_clauses {
        let cs = asm.add_empires(s - 1);
        let mut mapping = vec![t];
        mapping.extend(&cs);
        asm.instantiate(&bclause.graph, &mapping);
        for j in 1..=s - 1 {
            let b = instantiate_bminus(&mut asm, cs[(j - 1) as usize]);
            let lit = fg
                .clause_literal_neighbour(i, j)
                .ok_or_else(|| Error::InvalidInput("FG(s, s-1) clause vertex missing its literal".into()))?;
            let var = (lit - fg.s) / 2;
            let negated = (lit - fg.s) % 2 == 1;
            let (a, abar) = lit_empires[var as usize];
            let anchor = asm.vertex(if negated { abar } else { a }, 0);
            asm.add_edge(asm.vertex(b, iso), anchor);
            asm.tag(format!("b{i}_{j}"), vec![b]);
            asm.tag(format!("c{i}_{j}"), vec![cs[(j - 1) as usize]]);
        }
    }

    asm.tag(roles::T, vec![t]);
    asm.tag(roles::F, vec![truth[1]]);
    for i in 1..=s - 2 {
        asm.tag(roles::x(i), vec![x(i)]);
    }
    for (v, &(a, abar)) in lit_empires.iter().enumerate() {
        asm.tag(format!("a{v}"), vec![a]);
        asm.tag(format!("na{v}"), vec![abar]);
    }
    asm.finish()
}

/// Index (within its empire) of the isolated vertex of a B- artifact.
fn gadgets_bminus_iso_index(art: &GadgetArtifact) -> u32 {
    let u = art.role(roles::U_EMPIRE)[0];
    let iso = gadgets::b_minus_isolated_vertex(art);
    art.graph
        .empire_vertices(u)
        .iter()
        .position(|&x| x == iso)
        .expect("isolated vertex belongs to u") as u32
}

/// Formula graph to a component-wise planar empire graph
/// (r >= 2, 2r <= s < 6r - 3 - 2[r = 2]): cliques are realized by planar
/// decompositions of K_s spread over the r vertices of each empire, and
/// colour constraints by D gadgets.
pub fn fg_to_planar(fg: &FormulaGraph, r: u32, s: u32, budget: &Budget) -> Result<GadgetArtifact> {
    let bound = 6 * r - 3 - if r == 2 { 2 } else { 0 };
    if r < 2 || s < 2 * r || s >= bound {
        return Err(Error::ParamOutOfRange(format!(
            "fg_to_planar needs r >= 2 and 2r <= s < {bound}, got r={r} s={s}"
        )));
    }
    check_fg(fg, s)?;

    let layers = planar_decompose_k(s, r, budget)?;
    // Canonical D with u = 0 shared, v = 1 fresh; v's vertex 0 is isolated.
    let d = build_d(r, s, 0, 1, budget)?;

    let mut asm = Assembler::new(r);
    let truth = asm.add_empires(s);
    let realize_clique = |asm: &mut Assembler, empires: &[Empire]| {
        for (k, class) in layers.iter().enumerate() {
            for &(a, b) in class {
                let va = asm.vertex(empires[a as usize], k as u32);
                let vb = asm.vertex(empires[b as usize], k as u32);
                asm.add_edge(va, vb);
            }
        }
    };
    realize_clique(&mut asm, &truth);
    let t = truth[0];
    let x = |i: u32| truth[(1 + i) as usize];

    // D instantiation: empire 0 (u) -> shared, empire 1 (v) -> fresh forced
    // empire with its isolated vertex at index 0.
    let instantiate_d = |asm: &mut Assembler, shared: Empire| -> Empire {
        let fresh = asm.add_empire();
        let mut mapping = vec![u32::MAX; (s + 1) as usize];
        mapping[0] = shared;
        mapping[1] = fresh;
        for e in 2..=s {
            mapping[e as usize] = asm.add_empire();
        }
        asm.instantiate(&d.graph, &mapping);
        fresh
    };

    let mut lit_empires: Vec<(Empire, Empire)> = Vec::new();
    for v in 0..fg.num_vars {
        let a = asm.add_empire();
        let abar = asm.add_empire();
        for k in 1..r {
            asm.add_edge(asm.vertex(a, 0), asm.vertex(a, k));
            asm.add_edge(asm.vertex(abar, 0), asm.vertex(abar, k));
        }
        asm.add_edge(asm.vertex(a, 0), asm.vertex(abar, 0));
        asm.add_edge(asm.vertex(a, 0), asm.vertex(x(1), 0));
        for i in 1..=s - 2 {
            if i >= 2 {
                let w = instantiate_d(&mut asm, x(i));
                asm.add_edge(asm.vertex(w, 0), asm.vertex(a, 0));
                asm.tag(format!("W{i}_a{v}"), vec![w]);
            }
            let w = instantiate_d(&mut asm, x(i));
            asm.add_edge(asm.vertex(w, 0), asm.vertex(abar, 0));
            asm.tag(format!("W{i}_na{v}"), vec![w]);
        }
        lit_empires.push((a, abar));
    }

    for i in 0..fg.num_clauses {
        let cs = asm.add_empires(s - 1);
        let mut empires = vec![t];
        empires.extend(&cs);
        realize_clique(&mut asm, &empires);
        for j in 1..=s - 1 {
            let b = instantiate_d(&mut asm, cs[(j - 1) as usize]);
            let lit = fg
                .clause_literal_neighbour(i, j)
                .ok_or_else(|| Error::InvalidInput("FG(s, s-1) clause vertex missing its literal".into()))?;
            let var = (lit - fg.s) / 2;
            let negated = (lit - fg.s) % 2 == 1;
            let (a, abar) = lit_empires[var as usize];
            asm.add_edge(asm.vertex(b, 0), asm.vertex(if negated { abar } else { a }, 0));
            asm.tag(format!("b{i}_{j}"), vec![b]);
            asm.tag(format!("c{i}_{j}"), vec![cs[(j - 1) as usize]]);
        }
    }

    asm.tag(roles::T, vec![t]);
    asm.tag(roles::F, vec![truth[1]]);
    for i in 1..=s - 2 {
        asm.tag(roles::x(i), vec![x(i)]);
    }
    for (v, &(a, abar)) in lit_empires.iter().enumerate() {
        asm.tag(format!("a{v}"), vec![a]);
        asm.tag(format!("na{v}"), vec![abar]);
    }
    asm.finish()
}

/// Structural predicates used by tests and the stats command.
pub mod shape {
    use crate::connectivity;
    use crate::graph::EmpireGraph;

    /// Max degree <= 2 and acyclic.
    pub fn is_linear_forest(g: &EmpireGraph) -> bool {
        g.max_degree() <= 2 && is_forest(g)
    }

    pub fn is_forest(g: &EmpireGraph) -> bool {
        let adj = g.adjacency();
        let comps = connectivity::components(g.num_vertices() as usize, &adj);
        g.num_edges() + comps.len() == g.num_vertices() as usize
    }

    pub fn is_tree(g: &EmpireGraph) -> bool {
        is_forest(g) && g.num_vertices() > 0 && g.num_edges() == g.num_vertices() as usize - 1
    }

    /// Every connected component is planar.
    pub fn is_componentwise_planar(g: &EmpireGraph) -> bool {
        crate::planarity::is_planar(g.num_vertices(), g.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::dpll_solve;
    use crate::graph::reduce;
    use crate::solvers::{exact_empire_colour, SolveStatus};

    fn phi_sat() -> CnfFormula {
        // (a or b or d): satisfiable.
        CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap()
    }

    fn phi_unsat() -> CnfFormula {
        // (a) and (not a), padded to width 3.
        CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap()
    }

    #[test]
    fn lforest_shape_and_roundtrip() {
        let budget = Budget::default();
        for r in [2u32, 3] {
            let art = sat3_to_lforest(&phi_sat(), r).unwrap();
            assert!(shape::is_linear_forest(&art.graph), "r={r}");
            assert!(art.graph.is_strict());
            let res = exact_empire_colour(&art.graph, 3, &budget);
            assert_eq!(res.status, SolveStatus::Colourable, "r={r}");

            let art = sat3_to_lforest(&phi_unsat(), r).unwrap();
            assert!(shape::is_linear_forest(&art.graph), "r={r}");
            let res = exact_empire_colour(&art.graph, 3, &budget);
            assert_eq!(res.status, SolveStatus::NotColourable, "r={r}");
        }
    }

    #[test]
    fn tree_shape_and_roundtrip() {
        let budget = Budget::default();
        let art = sat3_to_tree(&phi_sat()).unwrap();
        assert!(shape::is_tree(&art.graph));
        assert!(art.graph.is_strict());
        assert_eq!(
            exact_empire_colour(&art.graph, 3, &budget).status,
            SolveStatus::Colourable
        );

        let art = sat3_to_tree(&phi_unsat()).unwrap();
        assert!(shape::is_tree(&art.graph));
        assert_eq!(
            exact_empire_colour(&art.graph, 3, &budget).status,
            SolveStatus::NotColourable
        );
    }

    #[test]
    fn pad_two_empire_path_grows_leaves() {
        // A path on 4 vertices, empires {0,1} of size 2; padding to r = 3
        // hangs one leaf off each empire's first vertex.
        let g = EmpireGraph::new_strict(2, vec![0, 1, 0, 1], vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let padded = pad_empires(&g, 3).unwrap();
        assert_eq!(padded.num_vertices(), 6);
        assert!(shape::is_tree(&padded));
        // New vertices 4, 5 hang off vertices 0 and 1 (the empires' first).
        assert!(padded.edges().contains(&(0, 4)));
        assert!(padded.edges().contains(&(1, 5)));
        assert_eq!(padded.empire_of(4), 0);
        assert_eq!(padded.empire_of(5), 1);
    }

    #[test]
    fn pad_empires_examples() {
        let budget = Budget::default();
        let art = sat3_to_tree(&phi_sat()).unwrap();
        let padded = pad_empires(&art.graph, 3).unwrap();
        assert!(shape::is_tree(&padded));
        assert!(padded.is_strict());
        assert_eq!(padded.r(), 3);
        assert_eq!(
            padded.num_vertices(),
            art.graph.num_vertices() + art.graph.num_empires()
        );
        assert_eq!(
            exact_empire_colour(&padded, 3, &budget).status,
            SolveStatus::Colourable
        );
        // Colourability equivalence on the unsatisfiable instance too.
        let art = sat3_to_tree(&phi_unsat()).unwrap();
        let padded = pad_empires(&art.graph, 4).unwrap();
        assert_eq!(
            exact_empire_colour(&padded, 3, &budget).status,
            SolveStatus::NotColourable
        );
    }

    #[test]
    fn fg_pipelines_small_roundtrip() {
        let budget = Budget::default();
        for (phi, expect_sat) in [(phi_sat(), true), (phi_unsat(), false)] {
            let phi = phi.padded_to(3).unwrap();
            assert_eq!(dpll_solve(&phi, &budget).is_sat(), expect_sat);
            let fg = crate::formula_graph::ksat_to_formula_graph(&phi, 4).unwrap();

            let lf = fg_to_lforest(&fg, 7).unwrap();
            assert!(shape::is_linear_forest(&lf.graph));
            assert_eq!(
                exact_empire_colour(&lf.graph, 4, &budget).status == SolveStatus::Colourable,
                expect_sat,
                "lforest"
            );

            let tree = fg_to_tree(&fg, 3, 4).unwrap();
            assert!(shape::is_tree(&tree.graph));
            assert_eq!(
                exact_empire_colour(&tree.graph, 4, &budget).status == SolveStatus::Colourable,
                expect_sat,
                "tree"
            );

            let planar = fg_to_planar(&fg, 2, 4, &budget).unwrap();
            assert!(shape::is_componentwise_planar(&planar.graph));
            assert_eq!(
                exact_empire_colour(&planar.graph, 4, &budget).status == SolveStatus::Colourable,
                expect_sat,
                "planar"
            );
        }
    }

    /// Shrinking each connector of the linearized formula graph back to a
    /// pseudo-vertex reproduces the formula graph's adjacency exactly
    /// (parallels collapse).
    #[test]
    fn lforest_linearization_shrinks_back() {
        let phi = phi_sat().padded_to(3).unwrap();
        let fg = crate::formula_graph::ksat_to_formula_graph(&phi, 4).unwrap();
        let art = fg_to_lforest(&fg, 7).unwrap();
        let fg_vertex_role = |v: u32| -> Vec<u32> {
            if v == 0 {
                art.role(roles::T).to_vec()
            } else if v == 1 {
                art.role(roles::F).to_vec()
            } else if v < fg.s {
                art.role(&roles::x(v - 1)).to_vec()
            } else if v < fg.s + 2 * fg.num_vars {
                let var = (v - fg.s) / 2;
                if (v - fg.s).is_multiple_of(2) {
                    art.role(&format!("a{var}")).to_vec()
                } else {
                    art.role(&format!("na{var}")).to_vec()
                }
            } else {
                let off = v - fg.s - 2 * fg.num_vars;
                let (i, j) = (off / (fg.s - 1), off % (fg.s - 1) + 1);
                art.role(&format!("c{i}_{j}")).to_vec()
            }
        };
        // Owner map: each monochromatic empire belongs to one fg vertex.
        let mut owner = vec![u32::MAX; art.graph.num_empires() as usize];
        for v in 0..fg.num_vertices() {
            let role = fg_vertex_role(v);
            assert!(!role.is_empty(), "fg vertex {v} untagged");
            for &e in &role {
                owner[e as usize] = v;
            }
        }
        let rg = reduce(&art.graph);
        // Forward: every fg edge survives as a mono-to-mono adjacency.
        for &(a, b) in &fg.edges {
            let (ra, rb) = (fg_vertex_role(a), fg_vertex_role(b));
            let connected =
                ra.iter().any(|&ea| rb.iter().any(|&eb| rg.are_adjacent(ea, eb)));
            assert!(connected, "fg edge ({a},{b}) lost");
        }
        // Backward: every adjacency between differently-owned empires comes
        // from an fg edge.
        for &(e1, e2) in rg.adjacency() {
            let (o1, o2) = (owner[e1 as usize], owner[e2 as usize]);
            if o1 == u32::MAX || o2 == u32::MAX || o1 == o2 {
                continue; // connector-internal structure
            }
            let (lo, hi) = (o1.min(o2), o1.max(o2));
            assert!(fg.edges.contains(&(lo, hi)), "spurious adjacency {o1}-{o2}");
        }
    }

    #[test]
    fn truth_empires_get_distinct_colours() {
        let budget = Budget::default();
        let art = sat3_to_tree(&phi_sat()).unwrap();
        let res = exact_empire_colour(&art.graph, 3, &budget);
        let c = res.colouring.unwrap();
        let t = art.role(roles::T)[0];
        let f = art.role(roles::F)[0];
        let x = art.role(&roles::x(1))[0];
        assert_ne!(c.colour_of(t), c.colour_of(f));
        assert_ne!(c.colour_of(t), c.colour_of(x));
        assert_ne!(c.colour_of(f), c.colour_of(x));
    }

    /// Stronger: across *every* valid colouring of a small tree output, the
    /// truth empires take pairwise distinct colours.
    #[test]
    fn truth_forcing_holds_in_all_colourings() {
        let phi = CnfFormula::new(1, vec![vec![1]]).unwrap(); // single positive unit
        let art = sat3_to_tree(&phi).unwrap();
        let rg = reduce(&art.graph);
        let t = art.role(roles::T)[0] as usize;
        let f = art.role(roles::F)[0] as usize;
        let x = art.role(&roles::x(1))[0] as usize;
        let mut total = 0u64;
        crate::solvers::for_each_colouring(&rg, 3, |c| {
            total += 1;
            assert!(c[t] != c[f] && c[t] != c[x] && c[f] != c[x]);
            true
        });
        assert!(total > 0);
    }
}
