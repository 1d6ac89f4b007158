//! CNF formulas, DIMACS round-tripping and a small complete DPLL solver.
//!
//! Literals follow the DIMACS convention: variable indices are 1-based and a
//! negative literal negates the variable. The solver is deliberately plain
//! (unit propagation, pure literals, highest-occurrence branching, false
//! first) and deterministic; instances at this library's scale are tiny.

use crate::budget::Budget;
use crate::error::{Error, Result};

/// A CNF formula. `k` is the declared maximum clause width, at least the
/// widest clause actually present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
    k: u32,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let mut width = 0;
        for cl in &clauses {
            if cl.is_empty() {
                return Err(Error::InvalidInput("empty clause".into()));
            }
            for &lit in cl {
                let v = lit.unsigned_abs();
                if lit == 0 || v > num_vars {
                    return Err(Error::InvalidInput(format!("literal {lit} out of range")));
                }
            }
            width = width.max(cl.len() as u32);
        }
        Ok(CnfFormula { num_vars, clauses, k: width })
    }

    /// Raises the declared width (used to force padding to a fixed k).
    pub fn with_width(mut self, k: u32) -> Result<Self> {
        if k < self.k {
            return Err(Error::InvalidInput(format!(
                "declared width {k} below widest clause {}",
                self.k
            )));
        }
        self.k = k;
        Ok(self)
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Pads every clause to exactly `k` literals by repeating its last
    /// literal; satisfiability is unchanged.
    pub fn padded_to(&self, k: u32) -> Result<CnfFormula> {
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for cl in &self.clauses {
            if cl.len() as u32 > k {
                return Err(Error::InvalidInput(format!(
                    "clause of width {} exceeds k = {k}",
                    cl.len()
                )));
            }
            let mut padded = cl.clone();
            while (padded.len() as u32) < k {
                padded.push(*cl.last().unwrap());
            }
            clauses.push(padded);
        }
        CnfFormula::new(self.num_vars, clauses)
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|cl| {
            cl.iter().any(|&lit| {
                let v = (lit.unsigned_abs() - 1) as usize;
                (lit > 0) == assignment[v]
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Vec<bool>),
    Unsat,
    Timeout,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

/// Complete DPLL: unit propagation, pure-literal elimination, branch on the
/// variable occurring most often in unresolved clauses (ties to the smallest
/// index), false branch first. SAT answers are verified before returning.
pub fn dpll_solve(phi: &CnfFormula, budget: &Budget) -> SatResult {
    let mut meter = budget.start();
    let mut assignment: Vec<Option<bool>> = vec![None; phi.num_vars() as usize];
    let result = dpll(phi, &mut assignment, &mut meter);
    match result {
        Some(true) => {
            let full: Vec<bool> =
                assignment.iter().map(|a| a.unwrap_or(false)).collect();
            debug_assert!(phi.eval(&full));
            SatResult::Sat(full)
        }
        Some(false) => SatResult::Unsat,
        None => SatResult::Timeout,
    }
}

/// None = budget exhausted.
fn dpll(phi: &CnfFormula, assignment: &mut Vec<Option<bool>>, meter: &mut crate::budget::Meter) -> Option<bool> {
    if !meter.tick() {
        return None;
    }

    // Unit propagation and pure literals to fixpoint.
    let mut trail: Vec<usize> = Vec::new();
    loop {
        let mut changed = false;
        let mut occurrences = vec![(false, false); phi.num_vars() as usize];
        let mut all_satisfied = true;
        for cl in phi.clauses() {
            let mut satisfied = false;
            let mut unassigned: Option<i32> = None;
            let mut unassigned_count = 0;
            for &lit in cl {
                let v = (lit.unsigned_abs() - 1) as usize;
                match assignment[v] {
                    Some(val) => {
                        if (lit > 0) == val {
                            satisfied = true;
                            break;
                        }
                    }
                    None => {
                        unassigned = Some(lit);
                        unassigned_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            all_satisfied = false;
            match unassigned_count {
                0 => {
                    for &v in &trail {
                        assignment[v] = None;
                    }
                    return Some(false);
                }
                1 => {
                    let lit = unassigned.unwrap();
                    let v = (lit.unsigned_abs() - 1) as usize;
                    assignment[v] = Some(lit > 0);
                    trail.push(v);
                    changed = true;
                }
                _ => {
                    for &lit in cl {
                        let v = (lit.unsigned_abs() - 1) as usize;
                        if assignment[v].is_none() {
                            if lit > 0 {
                                occurrences[v].0 = true;
                            } else {
                                occurrences[v].1 = true;
                            }
                        }
                    }
                }
            }
        }
        if all_satisfied {
            return Some(true);
        }
        if changed {
            continue;
        }
        // Pure literals: appear with one polarity among unresolved clauses.
        for v in 0..phi.num_vars() as usize {
            if assignment[v].is_none() {
                match occurrences[v] {
                    (true, false) => {
                        assignment[v] = Some(true);
                        trail.push(v);
                        changed = true;
                    }
                    (false, true) => {
                        assignment[v] = Some(false);
                        trail.push(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Branch on the most frequent unassigned variable in unresolved clauses.
    let mut count = vec![0u32; phi.num_vars() as usize];
    for cl in phi.clauses() {
        let satisfied = cl.iter().any(|&lit| {
            let v = (lit.unsigned_abs() - 1) as usize;
            assignment[v] == Some(lit > 0)
        });
        if !satisfied {
            for &lit in cl {
                let v = (lit.unsigned_abs() - 1) as usize;
                if assignment[v].is_none() {
                    count[v] += 1;
                }
            }
        }
    }
    let var = (0..phi.num_vars() as usize)
        .filter(|&v| assignment[v].is_none() && count[v] > 0)
        .max_by_key(|&v| (count[v], std::cmp::Reverse(v)));
    let Some(var) = var else {
        // No unresolved clause mentions an unassigned variable, yet not all
        // clauses were satisfied above: impossible, but answer safely.
        for &v in &trail {
            assignment[v] = None;
        }
        return Some(false);
    };

    for value in [false, true] {
        assignment[var] = Some(value);
        match dpll(phi, assignment, meter) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => {
                assignment[var] = None;
                for &v in &trail {
                    assignment[v] = None;
                }
                return None;
            }
        }
    }
    assignment[var] = None;
    for &v in &trail {
        assignment[v] = None;
    }
    Some(false)
}

/// Parses DIMACS CNF text. Comments (`c`) are ignored; clauses may span
/// lines and are 0-terminated.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(Error::Parse { line: lineno + 1, msg: format!("malformed header `{line}`") });
            }
            let n = parts[2].parse::<u32>().map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: format!("bad variable count: {e}"),
            })?;
            let m = parts[3].parse::<usize>().map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: format!("bad clause count: {e}"),
            })?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(Error::Parse { line: lineno + 1, msg: "clause before `p cnf` header".into() });
        };
        for tok in line.split_whitespace() {
            let lit = tok.parse::<i32>().map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: format!("bad literal `{tok}`: {e}"),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::Parse { line: lineno + 1, msg: "empty clause".into() });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() > n {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("literal {lit} out of range 1..={n}"),
                    });
                }
                current.push(lit);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(Error::Parse { line: 0, msg: "missing `p cnf` header".into() });
    };
    if !current.is_empty() {
        return Err(Error::Parse { line: 0, msg: "clause missing terminating 0".into() });
    }
    if clauses.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} clauses, found {}", clauses.len()),
        });
    }
    CnfFormula::new(n, clauses)
}

pub fn write_dimacs(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.num_vars(), phi.num_clauses());
    for cl in phi.clauses() {
        for &lit in cl {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
