//! Text formats: the `.eg` empire-graph format with role-tag comments, the
//! `.col` colouring format, and the formula-graph annotation convention on
//! top of `.eg`.
//!
//! Serialization is canonical (fixed line order) so that parse-serialize
//! round trips are byte-stable, and role comments keep gadget labels
//! greppable in the artifacts.

use crate::error::{Error, Result};
use crate::formula_graph::FormulaGraph;
use crate::gadgets::{GadgetArtifact, RoleMap};
use crate::graph::{Colouring, EmpireGraph};

/// Canonical `.eg` text: header, vertices, edges, then sorted role lines.
pub fn write_empire_graph(g: &EmpireGraph, roles: &RoleMap) -> String {
    let mut out = format!(
        "eg {} {} {} {}\n",
        g.num_vertices(),
        g.r(),
        g.num_empires(),
        g.num_edges()
    );
    for v in 0..g.num_vertices() {
        out.push_str(&format!("v {} {}\n", v, g.empire_of(v)));
    }
    for &(a, b) in g.edges() {
        out.push_str(&format!("e {a} {b}\n"));
    }
    for (tag, ids) in roles {
        out.push_str(&format!("# role {tag}"));
        for id in ids {
            out.push_str(&format!(" {id}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_artifact(art: &GadgetArtifact) -> String {
    write_empire_graph(&art.graph, &art.roles)
}

/// Parses `.eg` text; roles may appear anywhere, other comments are ignored.
pub fn parse_empire_graph(text: &str) -> Result<GadgetArtifact> {
    let mut header: Option<(u32, u32, u32, usize)> = None;
    let mut empire_of: Vec<Option<u32>> = Vec::new();
    let mut edges = Vec::new();
    let mut roles = RoleMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let fail = |msg: String| Error::Parse { line: lineno + 1, msg };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(role) = rest.strip_prefix("role ") {
                let mut parts = role.split_whitespace();
                let tag = parts.next().ok_or_else(|| fail("role line without tag".into()))?;
                let ids = parts
                    .map(|t| t.parse::<u32>().map_err(|e| fail(format!("bad role id `{t}`: {e}"))))
                    .collect::<Result<Vec<u32>>>()?;
                roles.insert(tag.to_string(), ids);
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let kind = parts.next().unwrap();
        let nums: Vec<u32> = parts
            .map(|t| t.parse::<u32>().map_err(|e| fail(format!("bad number `{t}`: {e}"))))
            .collect::<Result<Vec<u32>>>()?;
        match kind {
            "eg" => {
                if nums.len() != 4 {
                    return Err(fail("header needs: eg <vertices> <r> <empires> <edges>".into()));
                }
                header = Some((nums[0], nums[1], nums[2], nums[3] as usize));
                empire_of = vec![None; nums[0] as usize];
            }
            "v" => {
                let (n, ..) = header.ok_or_else(|| fail("v line before header".into()))?;
                if nums.len() != 2 || nums[0] >= n {
                    return Err(fail(format!("bad vertex line `{line}`")));
                }
                if empire_of[nums[0] as usize].replace(nums[1]).is_some() {
                    return Err(fail(format!("vertex {} defined twice", nums[0])));
                }
            }
            "e" => {
                if header.is_none() {
                    return Err(fail("e line before header".into()));
                }
                if nums.len() != 2 {
                    return Err(fail(format!("bad edge line `{line}`")));
                }
                edges.push((nums[0], nums[1]));
            }
            other => return Err(fail(format!("unknown record `{other}`"))),
        }
    }
    let Some((n, r, num_empires, num_edges)) = header else {
        return Err(Error::Parse { line: 0, msg: "missing `eg` header".into() });
    };
    if edges.len() != num_edges {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {num_edges} edges, found {}", edges.len()),
        });
    }
    let empire_of: Vec<u32> = empire_of
        .into_iter()
        .enumerate()
        .map(|(v, e)| e.ok_or(Error::Parse { line: 0, msg: format!("vertex {v} missing") }))
        .collect::<Result<_>>()?;
    let g = EmpireGraph::new(r, empire_of, edges)?;
    if g.num_vertices() != n || g.num_empires() != num_empires {
        return Err(Error::Parse {
            line: 0,
            msg: format!(
                "header declares {n} vertices / {num_empires} empires, body has {} / {}",
                g.num_vertices(),
                g.num_empires()
            ),
        });
    }
    Ok(GadgetArtifact { graph: g, roles })
}

pub fn write_colouring(c: &Colouring) -> String {
    let mut out = format!("col {}\n", c.s());
    for e in 0..c.num_empires() {
        out.push_str(&format!("c {} {}\n", e, c.colour_of(e)));
    }
    out
}

pub fn parse_colouring(text: &str) -> Result<Colouring> {
    let mut s: Option<u32> = None;
    let mut entries: Vec<(u32, u32)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let fail = |msg: String| Error::Parse { line: lineno + 1, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["col", sv] => {
                s = Some(sv.parse().map_err(|e| fail(format!("bad s: {e}")))?);
            }
            ["c", e, c] => {
                let e: u32 = e.parse().map_err(|err| fail(format!("bad empire: {err}")))?;
                let c: u32 = c.parse().map_err(|err| fail(format!("bad colour: {err}")))?;
                entries.push((e, c));
            }
            _ => return Err(fail(format!("unknown colouring line `{line}`"))),
        }
    }
    let Some(s) = s else {
        return Err(Error::Parse { line: 0, msg: "missing `col` header".into() });
    };
    entries.sort_unstable();
    let mut colour_of = vec![u32::MAX; entries.len()];
    for (i, &(e, c)) in entries.iter().enumerate() {
        if e as usize != i {
            return Err(Error::Parse {
                line: 0,
                msg: format!("empire ids must cover 0..{} exactly once", entries.len()),
            });
        }
        colour_of[i] = c;
    }
    Colouring::new(s, colour_of)
}

const TAG_PARAM_S: &str = "param_s";
const TAG_PARAM_K: &str = "param_k";

/// Serializes a formula graph as a 1-empire `.eg` file with role tags for
/// the truth clique, literal pairs and clause groups.
pub fn write_formula_graph(fg: &FormulaGraph) -> String {
    let g = fg.as_empire_graph();
    let mut roles = RoleMap::new();
    roles.insert(TAG_PARAM_S.into(), vec![fg.s]);
    roles.insert(TAG_PARAM_K.into(), vec![fg.k]);
    roles.insert("T".into(), vec![fg.t_vertex()]);
    roles.insert("F".into(), vec![fg.f_vertex()]);
    for i in 1..=fg.s - 2 {
        roles.insert(format!("X{i}"), vec![fg.x_vertex(i)]);
    }
    for v in 0..fg.num_vars {
        roles.insert(
            format!("pair{v}"),
            vec![fg.literal_vertex(v, false), fg.literal_vertex(v, true)],
        );
    }
    for i in 0..fg.num_clauses {
        roles.insert(format!("clause{i}"), (1..=fg.s - 1).map(|j| fg.clause_vertex(i, j)).collect());
    }
    write_empire_graph(&g, &roles)
}

pub fn parse_formula_graph(text: &str) -> Result<FormulaGraph> {
    let art = parse_empire_graph(text)?;
    let get1 = |tag: &str| -> Result<u32> {
        match art.roles.get(tag).map(|v| v.as_slice()) {
            Some([x]) => Ok(*x),
            _ => Err(Error::InvalidInput(format!("formula graph file lacks role `{tag}`"))),
        }
    };
    let s = get1(TAG_PARAM_S)?;
    let k = get1(TAG_PARAM_K)?;
    let num_vars = (0..).take_while(|v| art.roles.contains_key(&format!("pair{v}"))).count() as u32;
    let num_clauses =
        (0..).take_while(|i| art.roles.contains_key(&format!("clause{i}"))).count() as u32;
    let fg = FormulaGraph {
        s,
        k,
        num_vars,
        num_clauses,
        edges: art.graph.edges().to_vec(),
    };
    if fg.num_vertices() != art.graph.num_vertices() {
        return Err(Error::InvalidInput(format!(
            "formula graph layout mismatch: expected {} vertices, file has {}",
            fg.num_vertices(),
            art.graph.num_vertices()
        )));
    }
    // The canonical layout pins every role id; verify a sample.
    if get1("T")? != fg.t_vertex() || get1("F")? != fg.f_vertex() {
        return Err(Error::InvalidInput("formula graph roles do not match the canonical layout".into()));
    }
    Ok(fg)
}
