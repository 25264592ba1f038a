//! CNF instances, DIMACS text, and the odd cycle transversal encoding.
//!
//! For a graph on `n` vertices and a bound `k` each vertex `vᵢ` (1-based)
//! gets three variables: `V(i,1) = i` (in P1), `V(i,2) = n + i` (in P2) and
//! `V(i,3) = 2n + i` (removed). The at-most-`k` constraint on the removal
//! variables is a sequential counter whose register `s(i,j)`, `i ∈ 1..n-1`,
//! `j ∈ 1..k`, is variable `3n + (i-1)·k + j`.
//!
//! Clause order: one `V(i,1) ∨ V(i,2) ∨ V(i,3)` per vertex, then the two
//! independence clauses of every edge `{u, v}`, `u < v`, in lexicographic
//! edge order, then the counter clauses.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::UGraph;

pub type Clause = Vec<i32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("literal {0} out of range")]
    LiteralOutOfRange(i32),
    #[error("empty clause")]
    EmptyClause,
}

/// Truth values indexed by variable id; index 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(num_vars: usize) -> Self {
        Assignment(vec![false; num_vars + 1])
    }

    /// From DIMACS literals; unmentioned variables default to false.
    pub fn from_literals(num_vars: usize, lits: impl IntoIterator<Item = i32>) -> Self {
        let mut a = Self::new(num_vars);
        for l in lits {
            let v = l.unsigned_abs() as usize;
            if l != 0 && v <= num_vars {
                a.0[v] = l > 0;
            }
        }
        a
    }

    pub fn num_vars(&self) -> usize {
        self.0.len() - 1
    }

    pub fn var(&self, v: usize) -> bool {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, value: bool) {
        self.0[v] = value;
    }

    pub fn lit(&self, l: i32) -> bool {
        self.0[l.unsigned_abs() as usize] == (l > 0)
    }

    pub fn satisfies(&self, clause: &[i32]) -> bool {
        clause.iter().any(|&l| self.lit(l))
    }
}

/// Which of the three partition variables of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    P1,
    P2,
    Removed,
}

/// Meaning of the variables in an encoded OCT instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarMap {
    pub n: usize,
    pub k: usize,
}

impl VarMap {
    /// Variable of 0-based vertex `v`.
    pub fn vertex(&self, v: usize, part: Part) -> i32 {
        let base = match part {
            Part::P1 => 0,
            Part::P2 => self.n,
            Part::Removed => 2 * self.n,
        };
        (base + v + 1) as i32
    }

    /// Counter register `s(i,j)`, 1-based as in the module docs.
    pub fn counter(&self, i: usize, j: usize) -> i32 {
        assert!(i >= 1 && i < self.n && j >= 1 && j <= self.k);
        (3 * self.n + (i - 1) * self.k + j) as i32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    num_vars: usize,
    clauses: Vec<Clause>,
    var_map: Option<VarMap>,
}

impl CnfInstance {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for c in &clauses {
            if c.is_empty() {
                return Err(CnfError::EmptyClause);
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(CnfError::LiteralOutOfRange(l));
                }
            }
        }
        Ok(CnfInstance {
            num_vars,
            clauses,
            var_map: None,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn var_map(&self) -> Option<&VarMap> {
        self.var_map.as_ref()
    }

    pub fn evaluate(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| a.satisfies(c))
    }

    /// `p cnf <vars> <clauses>` followed by one 0-terminated clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::with_capacity(16 + self.clauses.len() * 12);
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for c in &self.clauses {
            for l in c {
                write!(out, "{l} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF. Comment lines (`c`) and a trailing `%` section are
/// skipped; clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |reason: &str| CnfError::Parse {
            line: i + 1,
            reason: reason.to_string(),
        };
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err("malformed header"));
            }
            let v = parts[2].parse().map_err(|_| err("bad variable count"))?;
            let c = parts[3].parse().map_err(|_| err("bad clause count"))?;
            header = Some((v, c));
            continue;
        }
        if header.is_none() {
            return Err(err("clause before header"));
        }
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| err("bad literal"))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    let (num_vars, num_clauses) = header.ok_or(CnfError::Parse {
        line: 0,
        reason: "missing header".into(),
    })?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != num_clauses {
        return Err(CnfError::Parse {
            line: 0,
            reason: format!("header announces {num_clauses} clauses, found {}", clauses.len()),
        });
    }
    CnfInstance::new(num_vars, clauses)
}

/// Sequential counter for "at most `k` of `vars` are true".
///
/// Register variables are numbered from `next_free_var`, row by row:
/// `s(i,j) = next_free_var + (i-1)·k + (j-1)`. Returns the clauses and the
/// next unused variable id. For `n = |vars| ≥ 2` and `k ≥ 1` this produces
/// `(n-1)·k` registers and `2nk + n - 3k - 1` clauses. `k = 0` becomes one
/// negative unit per input and needs no registers.
pub fn sinz_at_most_k(vars: &[i32], k: usize, next_free_var: i32) -> (Vec<Clause>, i32) {
    let n = vars.len();
    if k == 0 {
        return (vars.iter().map(|&x| vec![-x]).collect(), next_free_var);
    }
    if n <= 1 {
        return (Vec::new(), next_free_var);
    }
    let s = |i: usize, j: usize| next_free_var + ((i - 1) * k + (j - 1)) as i32;
    let x = |i: usize| vars[i - 1];
    let mut out = Vec::with_capacity(2 * n * k + n);
    out.push(vec![-x(1), s(1, 1)]);
    for j in 2..=k {
        out.push(vec![-s(1, j)]);
    }
    for i in 2..n {
        out.push(vec![-x(i), s(i, 1)]);
        out.push(vec![-s(i - 1, 1), s(i, 1)]);
        for j in 2..=k {
            out.push(vec![-x(i), -s(i - 1, j - 1), s(i, j)]);
            out.push(vec![-s(i - 1, j), s(i, j)]);
        }
        out.push(vec![-x(i), -s(i - 1, k)]);
    }
    out.push(vec![-x(n), -s(n - 1, k)]);
    (out, next_free_var + ((n - 1) * k) as i32)
}

/// Closed-form `(variables, clauses)` of [`encode_oct`] for `n ≥ 2, k ≥ 1`.
pub fn expected_oct_size(n: usize, m: usize, k: usize) -> (usize, usize) {
    ((n - 1) * (k + 3) + 3, 2 * m + 2 * n * k + 2 * n - 3 * k - 1)
}

/// CNF satisfiable iff removing at most `k` vertices makes `g` bipartite.
pub fn encode_oct(g: &UGraph, k: usize) -> CnfInstance {
    let n = g.vertex_count();
    let map = VarMap { n, k };
    let mut clauses: Vec<Clause> = Vec::with_capacity(n + 2 * g.edge_count() + 2 * n * k + n);
    for v in 0..n {
        clauses.push(vec![
            map.vertex(v, Part::P1),
            map.vertex(v, Part::P2),
            map.vertex(v, Part::Removed),
        ]);
    }
    for (u, v) in g.edges() {
        clauses.push(vec![-map.vertex(u, Part::P1), -map.vertex(v, Part::P1)]);
        clauses.push(vec![-map.vertex(u, Part::P2), -map.vertex(v, Part::P2)]);
    }
    let removal: Vec<i32> = (0..n).map(|v| map.vertex(v, Part::Removed)).collect();
    let (counter, next) = sinz_at_most_k(&removal, k, (3 * n + 1) as i32);
    clauses.extend(counter);
    let mut cnf = CnfInstance::new((next - 1) as usize, clauses).expect("encoding is well formed");
    cnf.var_map = Some(map);
    cnf
}

/// Vertex classes read off a model of [`encode_oct`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedPartition {
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub removed: Vec<usize>,
}

/// Removed vertices are those with `V(i,3)` true; of the rest, `V(i,1)`
/// decides P1 over P2.
pub fn decode_oct(map: &VarMap, model: &Assignment) -> DecodedPartition {
    let mut d = DecodedPartition {
        p1: Vec::new(),
        p2: Vec::new(),
        removed: Vec::new(),
    };
    for v in 0..map.n {
        if model.lit(map.vertex(v, Part::Removed)) {
            d.removed.push(v);
        } else if model.lit(map.vertex(v, Part::P1)) {
            d.p1.push(v);
        } else {
            d.p2.push(v);
        }
    }
    d
}
