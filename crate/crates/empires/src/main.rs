//! Command-line surface: gadget construction, reduction pipelines, exact
//! solving, verification, sparse colouring and file statistics.
//!
//! Exit codes: 0 success / colourable / SAT, 10 not colourable / UNSAT /
//! failed verification, 2 usage or input errors, 3 budget exhausted.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use empires::budget::Budget;
use empires::cnf::{dpll_solve, parse_dimacs, SatResult};
use empires::colouring::{sparse_colour, ColourOutcome};
use empires::eg_io;
use empires::error::Error;
use empires::formula_graph::ksat_to_formula_graph;
use empires::gadgets::{
    build_a, build_b, build_b_minus, build_b_plus, build_d_cached, build_e,
    canonical_forced_pair, planar_decompose_k_cached, GadgetArtifact,
};
use empires::graph::{reduce, verify_colouring, InfeasibilityWitness};
use empires::reductions::{self, shape};
use empires::solvers::{colouring_from_assignment, empire_to_cnf, exact_empire_colour, SolveStatus};

const EXIT_NEGATIVE: u8 = 10;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

/// println! that ignores broken pipes (e.g. piping into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "empires", version, about = "Empire colouring gadgets, reductions and solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a gadget and write it as an .eg file.
    Gadget {
        #[command(subcommand)]
        which: GadgetCmd,
    },
    /// Run a reduction pipeline.
    Reduce {
        #[command(subcommand)]
        which: ReduceCmd,
    },
    /// Decide (s, r)-colourability of an .eg file exactly.
    Solve {
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value_t = Engine::Backtrack)]
        engine: Engine,
        /// Node budget for the search.
        #[arg(long, default_value_t = 10_000_000)]
        max_nodes: u64,
        /// Input .eg file, or - for stdin.
        input: String,
    },
    /// Check a colouring file against a graph file.
    Verify { graph: String, colouring: String },
    /// Polynomial-time colouring for graphs in SPARSE(sigma).
    SparseColour {
        /// Rational sigma, e.g. 3/2; r * sigma must be integral.
        #[arg(long)]
        sigma: String,
        input: String,
    },
    /// Structural statistics of an .eg file.
    Stats { input: String },
    /// Decide satisfiability of a DIMACS CNF file.
    Dpll {
        input: String,
        #[arg(long, default_value_t = 10_000_000)]
        max_nodes: u64,
    },
}

#[derive(Subcommand)]
#[allow(clippy::upper_case_acronyms)]
enum GadgetCmd {
    /// Clique gadget B_{r,s}.
    #[command(name = "B")]
    B {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(short, long)]
        output: String,
    },
    /// Connected clique gadget B+_{r,s} rooted at an empire.
    #[command(name = "Bplus")]
    Bplus {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        /// Root empire.
        #[arg(long, default_value_t = 0)]
        root: u32,
        #[arg(short, long)]
        output: String,
    },
    /// Colour constraining gadget B-_{r,s}(u, v).
    #[command(name = "Bminus")]
    Bminus {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        /// Forced pair; defaults to the canonical path-end pair.
        #[arg(long)]
        u: Option<u32>,
        #[arg(long)]
        v: Option<u32>,
        #[arg(short, long)]
        output: String,
    },
    /// Guide graph E_{s,q,t}.
    #[command(name = "E")]
    E {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: u32,
        #[arg(short, long)]
        output: String,
    },
    /// Connector A_{r,s,m}.
    #[command(name = "A")]
    A {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        m: u32,
        #[arg(short, long)]
        output: String,
    },
    /// Planar colour constraining gadget D_{r,s}(u, v).
    #[command(name = "D")]
    D {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 0)]
        u: u32,
        #[arg(long, default_value_t = 1)]
        v: u32,
        /// Directory for cached search results.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Node budget for the layering search.
        #[arg(long, default_value_t = 50_000_000)]
        max_nodes: u64,
        #[arg(short, long)]
        output: String,
    },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// k-CNF to an (s,k)-formula graph.
    Sat2fg {
        #[arg(long)]
        s: u32,
        /// Pad clauses to exactly this width first (defaults to the widest
        /// clause present).
        #[arg(long)]
        k: Option<u32>,
        input: String,
        #[arg(short, long)]
        output: String,
    },
    /// 3-CNF to a linear forest, (3, r)-colourable iff satisfiable.
    Sat2lforest {
        #[arg(long)]
        r: u32,
        input: String,
        #[arg(short, long)]
        output: String,
    },
    /// 3-CNF to a tree, (3, r)-colourable iff satisfiable (r > 2 by padding).
    Sat2tree {
        #[arg(long, default_value_t = 2)]
        r: u32,
        input: String,
        #[arg(short, long)]
        output: String,
    },
    /// Formula graph to a linear forest via linearization.
    Fg2lforest {
        #[arg(long)]
        r: u32,
        input: String,
        #[arg(short, long)]
        output: String,
    },
    /// Formula graph to a tree via clique and colour constraining gadgets.
    Fg2tree {
        #[arg(long)]
        r: u32,
        input: String,
        #[arg(short, long)]
        output: String,
    },
    /// Formula graph to a component-wise planar empire graph.
    Fg2planar {
        #[arg(long)]
        r: u32,
        /// Directory for cached planar-search results.
        #[arg(long)]
        cache: Option<PathBuf>,
        input: String,
        #[arg(short, long)]
        output: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Backtrack,
    Cnf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Timeout(_) => ExitCode::from(EXIT_TIMEOUT),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Gadget { which } => run_gadget(which),
        Cmd::Reduce { which } => run_reduce(which),
        Cmd::Solve { s, engine, max_nodes, input } => run_solve(s, engine, max_nodes, &input),
        Cmd::Verify { graph, colouring } => run_verify(&graph, &colouring),
        Cmd::SparseColour { sigma, input } => run_sparse(&sigma, &input),
        Cmd::Stats { input } => run_stats(&input),
        Cmd::Dpll { input, max_nodes } => run_dpll(&input, max_nodes),
    }
}

/// Node-bounded budget with an effectively unlimited clock: exit codes must
/// depend on the input and the node limit only, never on wall time.
fn node_budget(max_nodes: u64) -> Budget {
    Budget { max_nodes, max_time: std::time::Duration::from_secs(86_400) }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn write_output(path: &str, content: &str) -> Result<(), Error> {
    if path == "-" {
        std::io::stdout().write_all(content.as_bytes())?;
        Ok(())
    } else {
        Ok(std::fs::write(path, content)?)
    }
}

fn parse_sigma(text: &str) -> Result<Ratio<i64>, Error> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|e| Error::InvalidInput(format!("bad sigma component `{t}`: {e}")))
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let den = parse(den)?;
            if den == 0 {
                return Err(Error::InvalidInput("sigma denominator is zero".into()));
            }
            Ok(Ratio::new(parse(num)?, den))
        }
        None => Ok(Ratio::from_integer(parse(text)?)),
    }
}

fn run_gadget(which: GadgetCmd) -> Result<ExitCode, Error> {
    let (art, output): (GadgetArtifact, String) = match which {
        GadgetCmd::B { r, s, output } => (build_b(r, s)?, output),
        GadgetCmd::Bplus { r, s, root, output } => (build_b_plus(r, s, root)?, output),
        GadgetCmd::Bminus { r, s, u, v, output } => {
            let (u, v) = match (u, v) {
                (Some(u), Some(v)) => (u, v),
                (None, None) => canonical_forced_pair(r, s)?,
                _ => {
                    return Err(Error::InvalidInput("pass both --u and --v, or neither".into()));
                }
            };
            (build_b_minus(r, s, u, v)?, output)
        }
        GadgetCmd::E { s, q, t, output } => (build_e(s, q, t)?, output),
        GadgetCmd::A { r, s, m, output } => (build_a(r, s, m)?, output),
        GadgetCmd::D { r, s, u, v, cache, max_nodes, output } => {
            let art = build_d_cached(cache.as_deref(), r, s, u, v, &node_budget(max_nodes))?;
            (art, output)
        }
    };
    write_output(&output, &eg_io::write_artifact(&art))?;
    Ok(ExitCode::SUCCESS)
}

fn run_reduce(which: ReduceCmd) -> Result<ExitCode, Error> {
    match which {
        ReduceCmd::Sat2fg { s, k, input, output } => {
            let mut phi = parse_dimacs(&read_input(&input)?)?;
            if let Some(k) = k {
                phi = phi.padded_to(k)?;
            }
            let fg = ksat_to_formula_graph(&phi, s)?;
            write_output(&output, &eg_io::write_formula_graph(&fg))?;
        }
        ReduceCmd::Sat2lforest { r, input, output } => {
            let phi = parse_dimacs(&read_input(&input)?)?;
            let art = reductions::sat3_to_lforest(&phi, r)?;
            write_output(&output, &eg_io::write_artifact(&art))?;
        }
        ReduceCmd::Sat2tree { r, input, output } => {
            let phi = parse_dimacs(&read_input(&input)?)?;
            let art = reductions::sat3_to_tree(&phi)?;
            let text = if r > 2 {
                let padded = reductions::pad_empires(&art.graph, r)?;
                eg_io::write_empire_graph(&padded, &art.roles)
            } else {
                eg_io::write_artifact(&art)
            };
            write_output(&output, &text)?;
        }
        ReduceCmd::Fg2lforest { r, input, output } => {
            let fg = eg_io::parse_formula_graph(&read_input(&input)?)?;
            let art = reductions::fg_to_lforest(&fg, r)?;
            write_output(&output, &eg_io::write_artifact(&art))?;
        }
        ReduceCmd::Fg2tree { r, input, output } => {
            let fg = eg_io::parse_formula_graph(&read_input(&input)?)?;
            let art = reductions::fg_to_tree(&fg, r, fg.s)?;
            write_output(&output, &eg_io::write_artifact(&art))?;
        }
        ReduceCmd::Fg2planar { r, cache, input, output } => {
            let fg = eg_io::parse_formula_graph(&read_input(&input)?)?;
            let budget = node_budget(50_000_000);
            if let Some(dir) = cache.as_deref() {
                // Warm the in-process memos from disk (or pay the search
                // once and persist it).
                planar_decompose_k_cached(Some(dir), fg.s, r, &budget)?;
                build_d_cached(Some(dir), r, fg.s, 0, 1, &budget)?;
            }
            let art = reductions::fg_to_planar(&fg, r, fg.s, &budget)?;
            write_output(&output, &eg_io::write_artifact(&art))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_solve(s: u32, engine: Engine, max_nodes: u64, input: &str) -> Result<ExitCode, Error> {
    let art = eg_io::parse_empire_graph(&read_input(input)?)?;
    let budget = node_budget(max_nodes);
    let outcome = match engine {
        Engine::Backtrack => {
            let res = exact_empire_colour(&art.graph, s, &budget);
            eprintln!("backtrack: {} nodes, {:?}", res.nodes, res.elapsed);
            match res.status {
                SolveStatus::Colourable => Some(res.colouring),
                SolveStatus::NotColourable => None,
                SolveStatus::Timeout => {
                    return Err(Error::Timeout(format!("after {} nodes", res.nodes)));
                }
            }
        }
        Engine::Cnf => {
            let phi = empire_to_cnf(&art.graph, s)?;
            match dpll_solve(&phi, &budget) {
                SatResult::Sat(a) => {
                    Some(Some(colouring_from_assignment(art.graph.num_empires(), s, &a)?))
                }
                SatResult::Unsat => None,
                SatResult::Timeout => return Err(Error::Timeout("CNF search".into())),
            }
        }
    };
    match outcome {
        Some(colouring) => {
            say!("COLOURABLE s={s}");
            if let Some(c) = colouring {
                debug_assert!(verify_colouring(&art.graph, &c)?.0);
                {
                use std::io::Write;
                let _ = write!(std::io::stdout(), "{}", eg_io::write_colouring(&c));
            }
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            say!("NOT COLOURABLE s={s}");
            Ok(ExitCode::from(EXIT_NEGATIVE))
        }
    }
}

fn run_verify(graph: &str, colouring: &str) -> Result<ExitCode, Error> {
    let art = eg_io::parse_empire_graph(&read_input(graph)?)?;
    let c = eg_io::parse_colouring(&read_input(colouring)?)?;
    let (ok, violated) = verify_colouring(&art.graph, &c)?;
    if ok {
        say!("VALID");
        Ok(ExitCode::SUCCESS)
    } else {
        say!("INVALID ({} violated edges)", violated.len());
        for (u, v) in violated {
            say!(
                "violated: {u} {v} (empires {} {})",
                art.graph.empire_of(u),
                art.graph.empire_of(v)
            );
        }
        Ok(ExitCode::from(EXIT_NEGATIVE))
    }
}

fn run_sparse(sigma: &str, input: &str) -> Result<ExitCode, Error> {
    let art = eg_io::parse_empire_graph(&read_input(input)?)?;
    let sigma = parse_sigma(sigma)?;
    match sparse_colour(&art.graph, sigma)? {
        ColourOutcome::Coloured(c) => {
            say!("COLOURABLE s={}", c.s());
            {
                use std::io::Write;
                let _ = write!(std::io::stdout(), "{}", eg_io::write_colouring(&c));
            }
            Ok(ExitCode::SUCCESS)
        }
        ColourOutcome::Infeasible(w) => {
            match w {
                InfeasibilityWitness::CliqueFound(e) => say!("WITNESS clique {e:?}"),
                InfeasibilityWitness::OddCycleFound(e) => say!("WITNESS odd-cycle {e:?}"),
                InfeasibilityWitness::ExhaustedSearch(e) => say!("WITNESS exhausted {e:?}"),
            }
            Ok(ExitCode::from(EXIT_NEGATIVE))
        }
    }
}

fn run_stats(input: &str) -> Result<ExitCode, Error> {
    let art = eg_io::parse_empire_graph(&read_input(input)?)?;
    let g = &art.graph;
    say!(
        "vertices {} empires {} r {} edges {}",
        g.num_vertices(),
        g.num_empires(),
        g.r(),
        g.num_edges()
    );
    let mut sizes = vec![0u32; g.num_empires() as usize];
    for v in 0..g.num_vertices() {
        sizes[g.empire_of(v) as usize] += 1;
    }
    say!(
        "empire sizes {}..{} (strict: {})",
        sizes.iter().min().unwrap_or(&0),
        sizes.iter().max().unwrap_or(&0),
        g.is_strict()
    );
    let mut hist = std::collections::BTreeMap::new();
    let mut deg = vec![0usize; g.num_vertices() as usize];
    for &(a, b) in g.edges() {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    for d in deg {
        *hist.entry(d).or_insert(0usize) += 1;
    }
    let hist: Vec<String> = hist.iter().map(|(d, c)| format!("{d}:{c}")).collect();
    say!("degree histogram {}", hist.join(" "));
    if g.num_vertices() > 0 {
        let density = empires::density::max_subgraph_avg_degree(g.num_vertices(), g.edges())?;
        say!("max subgraph average degree {density}");
    }
    say!(
        "linear-forest {} forest {} tree {} componentwise-planar {}",
        shape::is_linear_forest(g),
        shape::is_forest(g),
        shape::is_tree(g),
        shape::is_componentwise_planar(g)
    );
    let rg = reduce(g);
    say!(
        "reduced: empires {} adjacent-pairs {}",
        rg.num_empires(),
        rg.num_adjacent_pairs()
    );
    if !art.roles.is_empty() {
        let tags: Vec<&str> = art.roles.keys().map(|s| s.as_str()).collect();
        say!("roles {}", tags.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_dpll(input: &str, max_nodes: u64) -> Result<ExitCode, Error> {
    let phi = parse_dimacs(&read_input(input)?)?;
    match dpll_solve(&phi, &node_budget(max_nodes)) {
        SatResult::Sat(a) => {
            let lits: Vec<String> = a
                .iter()
                .enumerate()
                .map(|(v, &val)| if val { format!("{}", v + 1) } else { format!("-{}", v + 1) })
                .collect();
            say!("SAT");
            say!("v {} 0", lits.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        SatResult::Unsat => {
            say!("UNSAT");
            Ok(ExitCode::from(EXIT_NEGATIVE))
        }
        SatResult::Timeout => Err(Error::Timeout("DPLL".into())),
    }
}
