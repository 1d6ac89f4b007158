//! Connectivity gadgets: the guide graphs E_{s,q,t} with their forced
//! monochromatic vertex sets, Euler-tour machinery, the linear-forest
//! connectors A_{r,s,m} realized by walking trail decompositions of E, and
//! the linearization operation that swaps an empire for a connector.

use super::{roles, GadgetArtifact, RoleMap};
use crate::error::{Error, Result};
use crate::graph::{reduce, Empire, EmpireGraph, Vertex};

/// Socket index cycling used by the grafting rules (1-based sockets).
fn socket_cycle(i: u32, q: u32) -> u32 {
    ((i - 1) % q) + 1
}

/// The guide graph E_{s,q,t}: a (s-1)-clique of colour constraining vertices
/// joined to a plug and q sockets, grown t-fold by grafting plugless copies
/// onto the previous sockets. All of plug, sockets and internal socket
/// layers are forced to one colour in any proper s-colouring.
pub fn build_e(s: u32, q: u32, t: u32) -> Result<GadgetArtifact> {
    if s < 3 {
        return Err(Error::ParamOutOfRange(format!("build_e needs s >= 3, got {s}")));
    }
    if q == 0 || q * q < s - 1 {
        return Err(Error::ParamOutOfRange(format!(
            "build_e needs q >= sqrt(s-1): q={q}, s={s}"
        )));
    }
    if t < 1 {
        return Err(Error::ParamOutOfRange("build_e needs t >= 1".into()));
    }

    let copy_size = s + q - 1;
    let n = copy_size * t + 1;
    // Vertex ids: 0 is the plug; copy tau (1-based) holds w^1..w^{s-1} then
    // u^1..u^q starting at 1 + (tau-1) * copy_size.
    let w = |tau: u32, j: u32| 1 + (tau - 1) * copy_size + (j - 1);
    let u = |tau: u32, i: u32| 1 + (tau - 1) * copy_size + (s - 1) + (i - 1);

    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for tau in 1..=t {
        for j in 1..=s - 1 {
            for j2 in j + 1..=s - 1 {
                edges.push((w(tau, j), w(tau, j2)));
            }
        }
        for i in 1..=q {
            for j in 1..=s - 1 {
                edges.push((u(tau, i), w(tau, j)));
            }
        }
        if tau == 1 {
            for j in 1..=s - 1 {
                edges.push((0, w(1, j)));
            }
        } else {
            // Graft this copy's constraining vertices onto the previous
            // sockets, one edge per new w, split by the parity of s.
            let prev = tau - 1;
            if s % 2 == 1 {
                for i in 1..=(s - 1) / 2 {
                    let sock = socket_cycle(i, q);
                    edges.push((u(prev, sock), w(tau, 2 * i - 1)));
                    edges.push((u(prev, sock), w(tau, 2 * i)));
                }
            } else if s - 1 < q {
                for i in 1..=s - 1 {
                    edges.push((u(prev, i), w(tau, i)));
                }
            } else {
                for i in 1..=q {
                    edges.push((u(prev, i), w(tau, i)));
                }
                for i in 1..=(s - 1 - q) / 2 {
                    let sock = socket_cycle(i, q);
                    edges.push((u(prev, sock), w(tau, q + 2 * i - 1)));
                    edges.push((u(prev, sock), w(tau, q + 2 * i)));
                }
                if q.is_multiple_of(2) {
                    edges.push((u(prev, q), w(tau, s - 1)));
                }
            }
        }
    }

    let graph = EmpireGraph::new(1, (0..n).collect(), edges)?;
    let mut role_map = RoleMap::new();
    role_map.insert(roles::PLUG.into(), vec![0]);
    role_map.insert(roles::SOCKET.into(), (1..=q).map(|i| u(t, i)).collect());
    role_map.insert(
        roles::COLOUR_CONSTRAINING.into(),
        (1..=t).flat_map(|tau| (1..=s - 1).map(move |j| w(tau, j))).collect(),
    );
    for tau in 1..t {
        role_map.insert(roles::internal_group(tau), (1..=q).map(|i| u(tau, i)).collect());
    }
    let mut mono = vec![0u32];
    mono.extend((1..=t).flat_map(|tau| (1..=q).map(move |i| u(tau, i))));
    mono.sort_unstable();
    role_map.insert(roles::MONO.into(), mono);
    Ok(GadgetArtifact { graph, roles: role_map })
}

/// Closed Euler tour of a connected even-degree graph (Hierholzer),
/// starting from the smallest non-isolated vertex. Returns the directed
/// edge sequence.
pub fn euler_tour(n: u32, edges: &[(Vertex, Vertex)]) -> Result<Vec<(Vertex, Vertex)>> {
    let mut deg = vec![0usize; n as usize];
    for &(a, b) in edges {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    if let Some(v) = (0..n).find(|&v| deg[v as usize] % 2 == 1) {
        return Err(Error::InvalidInput(format!("vertex {v} has odd degree")));
    }
    let Some(start) = (0..n).find(|&v| deg[v as usize] > 0) else {
        return Ok(Vec::new());
    };
    let circuit = hierholzer(n, edges, start);
    if circuit.len() != edges.len() + 1 {
        return Err(Error::InvalidInput("graph is not connected on its non-isolated vertices".into()));
    }
    Ok(circuit.windows(2).map(|w| (w[0], w[1])).collect())
}

/// Hierholzer circuit as a vertex sequence (first = last = start). Takes
/// every edge reachable from `start`; callers check coverage.
fn hierholzer(n: u32, edges: &[(Vertex, Vertex)], start: Vertex) -> Vec<Vertex> {
    let mut adj: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); n as usize];
    for (id, &(a, b)) in edges.iter().enumerate() {
        adj[a as usize].push((b, id));
        adj[b as usize].push((a, id));
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mut used = vec![false; edges.len()];
    let mut ptr = vec![0usize; n as usize];
    let mut stack = vec![start];
    let mut circuit = Vec::new();
    while let Some(&v) = stack.last() {
        let p = &mut ptr[v as usize];
        while *p < adj[v as usize].len() && used[adj[v as usize][*p].1] {
            *p += 1;
        }
        if *p == adj[v as usize].len() {
            circuit.push(v);
            stack.pop();
        } else {
            let (to, id) = adj[v as usize][*p];
            used[id] = true;
            stack.push(to);
        }
    }
    circuit.reverse();
    circuit
}

/// Splits a connected graph into edge-disjoint open trails whose endpoints
/// are exactly the odd-degree vertices (via a dummy apex), or one closed
/// tour from `root` when every degree is even.
fn trail_decomposition(n: u32, edges: &[(Vertex, Vertex)], root: Vertex) -> Result<Vec<Vec<Vertex>>> {
    let mut deg = vec![0usize; n as usize];
    for &(a, b) in edges {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    let odd: Vec<Vertex> = (0..n).filter(|&v| deg[v as usize] % 2 == 1).collect();
    if odd.is_empty() {
        let tour = euler_tour(n, edges)?;
        if tour.is_empty() {
            return Ok(Vec::new());
        }
        let circuit = hierholzer(n, edges, root);
        if circuit.len() != edges.len() + 1 {
            return Err(Error::InvalidInput("not connected".into()));
        }
        return Ok(vec![circuit]);
    }
    let dummy = n;
    let mut aug = edges.to_vec();
    for &v in &odd {
        aug.push((v, dummy));
    }
    let circuit = hierholzer(n + 1, &aug, dummy);
    if circuit.len() != aug.len() + 1 {
        return Err(Error::InvalidInput("not connected".into()));
    }
    // Cut the circuit at every dummy visit.
    let mut trails = Vec::new();
    let mut current: Vec<Vertex> = Vec::new();
    for &v in &circuit {
        if v == dummy {
            if current.len() > 1 {
                trails.push(std::mem::take(&mut current));
            } else {
                current.clear();
            }
        } else {
            current.push(v);
        }
    }
    debug_assert!(current.is_empty() || current.len() == 1);
    debug_assert_eq!(trails.len(), odd.len() / 2);
    Ok(trails)
}

/// Number of isolated monochromatic vertices A_{r,s,m} provides at depth t.
///
/// For odd s the whole guide graph is Eulerian and the count is exactly
/// r-1 + t(qr - (q+1)(s-1)/2); even s subtracts one extra
/// degree-1 vertex for every pair of ungrafted sockets in an internal layer
/// (parity forces those sockets to end a trail).
pub(crate) fn a_isolated_count(r: u32, s: u32, q: u32, t: u32) -> i64 {
    let (r, s, q, t) = (r as i64, s as i64, q as i64, t as i64);
    if s % 2 == 1 {
        r - 1 + t * (q * r - (q + 1) * (s - 1) / 2)
    } else {
        let ungrafted = 0.max(q - s + 1);
        (q + 1) * (r - s / 2) + (t - 1) * (q * r - (q + 1) * (s - 1) / 2 - ungrafted / 2)
    }
}

/// Upper bound on s for A_{r,s,m}: s < 2r - sqrt(2r + 1/4) + 3/2, checked
/// exactly as 8r + 1 < (4r + 3 - 2s)^2.
pub(crate) fn a_range_ok(r: u32, s: u32) -> bool {
    let (r, s) = (r as i64, s as i64);
    let d = 4 * r + 3 - 2 * s;
    d > 0 && 8 * r + 1 < d * d
}

/// The m-connector A_{r,s,m}: a linear forest whose reduced graph is
/// E_{s,q,t}, with at least m isolated vertices all forced to one colour
/// (the monochromatic set Z). For m <= r a single edgeless empire suffices.
pub fn build_a(r: u32, s: u32, m: u32) -> Result<GadgetArtifact> {
    if r < 2 {
        return Err(Error::ParamOutOfRange("build_a needs r >= 2".into()));
    }
    if m < 1 {
        return Err(Error::ParamOutOfRange("build_a needs m >= 1".into()));
    }
    if s < 3 || !a_range_ok(r, s) {
        return Err(Error::ParamOutOfRange(format!(
            "build_a needs 3 <= s < 2r - sqrt(2r + 1/4) + 3/2, got r={r} s={s}"
        )));
    }
    if m < r {
        // A single edgeless empire already provides r >= m isolated vertices
        // of one colour.
        let graph = EmpireGraph::new_strict(r, vec![0; r as usize], vec![])?;
        let mut role_map = RoleMap::new();
        role_map.insert(roles::MONO.into(), vec![0]);
        role_map.insert(roles::Z.into(), (0..r).collect());
        return Ok(GadgetArtifact { graph, roles: role_map });
    }

    let q = 2 * r - (s - 1);
    let growth = a_isolated_count(r, s, q, 2) - a_isolated_count(r, s, q, 1);
    debug_assert!(growth > 0, "isolated count must grow with t in range");
    let mut t = 1;
    while a_isolated_count(r, s, q, t) < m as i64 {
        t += 1;
    }

    let guide = build_e(s, q, t)?;
    let e_n = guide.graph.num_vertices();
    let trails = trail_decomposition(e_n, guide.graph.edges(), 0)?;

    // Walk each trail, spending one fresh vertex of an empire per visit;
    // consecutive trail edges share the vertex in the middle.
    let mut next = vec![0u32; e_n as usize];
    let mut alloc = |e: Vertex| -> Result<Vertex> {
        let k = next[e as usize];
        if k >= r {
            return Err(Error::SearchFailed(format!("empire {e} exceeded its r vertices")));
        }
        next[e as usize] = k + 1;
        Ok(e * r + k)
    };
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for trail in &trails {
        let mut cur = alloc(trail[0])?;
        for &hop in &trail[1..] {
            let nxt = alloc(hop)?;
            edges.push((cur, nxt));
            cur = nxt;
        }
    }

    let empire_of: Vec<Empire> = (0..e_n * r).map(|v| v / r).collect();
    let graph = EmpireGraph::new_strict(r, empire_of, edges)?;

    let mono: Vec<Empire> = guide.role(roles::MONO).to_vec();
    let mut z: Vec<Vertex> = Vec::new();
    for &e in &mono {
        for k in next[e as usize]..r {
            z.push(e * r + k);
        }
    }
    z.sort_unstable();
    debug_assert_eq!(z.len() as i64, a_isolated_count(r, s, q, t));
    debug_assert!(z.len() as i64 >= m as i64);

    let mut role_map = guide.roles.clone();
    role_map.insert(roles::MONO.into(), mono);
    role_map.insert(roles::Z.into(), z);
    Ok(GadgetArtifact { graph, roles: role_map })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeCounts {
    pub deg2: u32,
    pub deg1: u32,
    pub deg0: u32,
}

/// Degree distribution of an A artifact, split by empire class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeTable {
    pub plug: Option<DegreeCounts>,
    /// One entry per colour constraining empire.
    pub constraining: Vec<DegreeCounts>,
    /// Aggregate counts per internal socket layer.
    pub internal_groups: Vec<DegreeCounts>,
    /// One entry per final socket empire.
    pub sockets: Vec<DegreeCounts>,
    /// Set for the degenerate single-empire connector (m <= r).
    pub degenerate: Option<DegreeCounts>,
}

pub fn degree_distribution(art: &GadgetArtifact) -> Result<DegreeTable> {
    let g = &art.graph;
    let mut deg = vec![0u32; g.num_vertices() as usize];
    for &(a, b) in g.edges() {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    let counts_for = |empires: &[u32]| -> Result<DegreeCounts> {
        let mut c = DegreeCounts { deg2: 0, deg1: 0, deg0: 0 };
        for &e in empires {
            for v in g.empire_vertices(e) {
                match deg[v as usize] {
                    0 => c.deg0 += 1,
                    1 => c.deg1 += 1,
                    2 => c.deg2 += 1,
                    d => {
                        return Err(Error::InvalidInput(format!(
                            "vertex {v} has degree {d}; not a linear forest"
                        )))
                    }
                }
            }
        }
        Ok(c)
    };

    if !art.roles.contains_key(roles::PLUG) {
        if art.role(roles::MONO) == [0] && g.num_edges() == 0 && g.num_empires() == 1 {
            return Ok(DegreeTable {
                plug: None,
                constraining: Vec::new(),
                internal_groups: Vec::new(),
                sockets: Vec::new(),
                degenerate: Some(counts_for(&[0])?),
            });
        }
        return Err(Error::InvalidInput("artifact was not produced by build_a".into()));
    }

    let plug = counts_for(art.role(roles::PLUG))?;
    let constraining = art
        .role(roles::COLOUR_CONSTRAINING)
        .iter()
        .map(|&e| counts_for(&[e]))
        .collect::<Result<Vec<_>>>()?;
    let mut internal_groups = Vec::new();
    for tau in 1.. {
        match art.roles.get(&roles::internal_group(tau)) {
            Some(group) => internal_groups.push(counts_for(group)?),
            None => break,
        }
    }
    let sockets = art
        .role(roles::SOCKET)
        .iter()
        .map(|&e| counts_for(&[e]))
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeTable { plug: Some(plug), constraining, internal_groups, sockets, degenerate: None })
}

/// Bookkeeping returned by [`linearize_with_budget`].
#[derive(Debug, Clone)]
pub struct LinearizeInfo {
    /// Old empire id -> new id (None for the removed empire).
    pub empire_remap: Vec<Option<Empire>>,
    /// Old vertex id -> new id (None for the removed empire's vertices).
    pub vertex_remap: Vec<Option<Vertex>>,
    /// New ids of the connector's monochromatic empires.
    pub mono_empires: Vec<Empire>,
    /// (new neighbour empire id, Z vertex carrying the re-attached edge).
    pub attached: Vec<(Empire, Vertex)>,
    /// Z vertices (new ids) left unused by the re-attachment, in order.
    pub free_z: Vec<Vertex>,
}

/// Replaces empire `v` of `g` with a connector A_{r_out,s,m}, m being v's
/// reduced degree: one edge per former reduced adjacency is re-attached to a
/// distinct monochromatic vertex (parallel cross edges collapse, which
/// preserves colourability).
pub fn linearize(g: &EmpireGraph, v: Empire, r_out: u32, s: u32) -> Result<EmpireGraph> {
    linearize_with_budget(g, v, r_out, s, 0).map(|(g, _)| g)
}

/// [`linearize`] with `extra` additional monochromatic vertices reserved for
/// the caller's own wiring (reported in `free_z`).
pub fn linearize_with_budget(
    g: &EmpireGraph,
    v: Empire,
    r_out: u32,
    s: u32,
    extra: u32,
) -> Result<(EmpireGraph, LinearizeInfo)> {
    if v >= g.num_empires() {
        return Err(Error::InvalidInput(format!("empire {v} out of range")));
    }
    let rg = reduce(g);
    let neighbours: Vec<Empire> = rg.neighbours(v).to_vec();
    let m = neighbours.len() as u32;
    let a = build_a(r_out, s, (m + extra).max(1))?;

    // Representative vertex-level edge per reduced adjacency, smallest first.
    let mut rep: Vec<Vertex> = Vec::new();
    for &u in &neighbours {
        let anchor = g
            .edges()
            .iter()
            .find_map(|&(x, y)| {
                let (ex, ey) = (g.empire_of(x), g.empire_of(y));
                if (ex, ey) == (u, v) {
                    Some(x)
                } else if (ex, ey) == (v, u) {
                    Some(y)
                } else {
                    None
                }
            })
            .expect("adjaceny implies a cross edge");
        rep.push(anchor);
    }

    // Renumber: drop v's vertices, shift empires above v down, then append
    // the connector.
    let mut vertex_remap: Vec<Option<Vertex>> = Vec::with_capacity(g.num_vertices() as usize);
    let mut kept = 0u32;
    for x in 0..g.num_vertices() {
        if g.empire_of(x) == v {
            vertex_remap.push(None);
        } else {
            vertex_remap.push(Some(kept));
            kept += 1;
        }
    }
    let empire_remap: Vec<Option<Empire>> = (0..g.num_empires())
        .map(|e| match e.cmp(&v) {
            std::cmp::Ordering::Less => Some(e),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(e - 1),
        })
        .collect();
    let empire_base = g.num_empires() - 1;
    let vertex_base = kept;

    let mut empire_of: Vec<Empire> = Vec::new();
    for x in 0..g.num_vertices() {
        if vertex_remap[x as usize].is_some() {
            empire_of.push(empire_remap[g.empire_of(x) as usize].expect("kept empire"));
        }
    }
    for x in 0..a.graph.num_vertices() {
        empire_of.push(empire_base + a.graph.empire_of(x));
    }

    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for &(x, y) in g.edges() {
        if let (Some(nx), Some(ny)) = (vertex_remap[x as usize], vertex_remap[y as usize]) {
            edges.push((nx, ny));
        }
    }
    for &(x, y) in a.graph.edges() {
        edges.push((vertex_base + x, vertex_base + y));
    }
    let z: Vec<Vertex> = a.role(roles::Z).iter().map(|&x| vertex_base + x).collect();
    let mut attached = Vec::new();
    for (i, (&u, &anchor)) in neighbours.iter().zip(&rep).enumerate() {
        let target = z[i];
        let nx = vertex_remap[anchor as usize].expect("anchor survives");
        edges.push((nx, target));
        attached.push((empire_remap[u as usize].expect("kept"), target));
    }

    let new_r = g.r().max(r_out);
    let out = EmpireGraph::new(new_r, empire_of, edges)?;
    let info = LinearizeInfo {
        empire_remap,
        vertex_remap,
        mono_empires: a.role(roles::MONO).iter().map(|&e| empire_base + e).collect(),
        attached,
        free_z: z[neighbours.len()..].to_vec(),
    };
    Ok((out, info))
}
