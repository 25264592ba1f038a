//! Odd cycle transversals: vertex sets whose removal leaves a bipartite graph.
//!
//! The exact route encodes "at most `k` removals" as CNF ([`cnf`]) and
//! searches for the smallest satisfiable `k`. Heuristics ([`heuristics`])
//! trade optimality for speed, and [`brute_force_oct`] is the reference for
//! small graphs. Every result is checked to bipartize the graph and is
//! inclusion-minimal.

pub mod cnf;
pub mod external;
pub mod heuristics;
pub mod sat;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{bipartite_check, is_bipartite_without, removal_mask, Bipartition, UGraph};
use crate::par::{self, Parallelism};

pub use cnf::{encode_oct, CnfInstance};
pub use external::ExternalSolver;
pub use heuristics::{oct_anneal, oct_genetic, oct_greedy, AnnealParams, GeneticParams};
pub use sat::{Branching, SatOutcome, SolverConfig};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OctError {
    #[error("SAT backend failure: {0}")]
    BackendFailure(String),
    #[error("graph has {n} vertices, brute force is limited to {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OctMethod {
    SatExact,
    Greedy,
    Anneal,
    Genetic,
    Brute,
    Scripted,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OctStats {
    /// SAT calls, heuristic steps or subsets tested, depending on the method.
    pub iterations: u64,
    /// Budgets tried by the exact search, in order.
    pub k_tried: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OctResult {
    /// Removed vertices, ascending.
    pub removed: Vec<usize>,
    pub method: OctMethod,
    /// Minimum cardinality is guaranteed.
    pub optimal: bool,
    pub stats: OctStats,
}

impl OctResult {
    pub fn len(&self) -> usize {
        self.removed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.removed.is_empty()
    }
}

/// Anything that can pick a bipartizing vertex set for the engine.
pub trait Bipartizer {
    fn bipartize(&mut self, g: &UGraph) -> Result<OctResult, OctError>;
}

impl<F> Bipartizer for F
where
    F: FnMut(&UGraph) -> Result<OctResult, OctError>,
{
    fn bipartize(&mut self, g: &UGraph) -> Result<OctResult, OctError> {
        self(g)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum KSearch {
    #[default]
    Linear,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatBackend {
    Builtin(SolverConfig),
    External(ExternalSolver),
}

impl Default for SatBackend {
    fn default() -> Self {
        SatBackend::Builtin(SolverConfig::default())
    }
}

impl SatBackend {
    pub fn solve(&self, cnf: &CnfInstance) -> Result<SatOutcome, OctError> {
        match self {
            SatBackend::Builtin(cfg) => Ok(sat::solve(cnf, *cfg)),
            SatBackend::External(ext) => ext.solve(cnf),
        }
    }
}

/// Solver selection for the engine.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Sat { backend: SatBackend, search: KSearch },
    Greedy,
    Anneal { seed: u64, params: AnnealParams },
    Genetic { seed: u64, params: GeneticParams },
    Brute { bound: usize },
    /// Runs the exact search and every heuristic, keeps the smallest result
    /// (exact wins ties).
    Portfolio { seed: u64, par: Parallelism },
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::Sat {
            backend: SatBackend::default(),
            search: KSearch::Linear,
        }
    }
}

impl Strategy {
    pub fn solve(&self, g: &UGraph) -> Result<OctResult, OctError> {
        match self {
            Strategy::Sat { backend, search } => min_oct_exact(g, *search, backend),
            Strategy::Greedy => Ok(oct_greedy(g)),
            Strategy::Anneal { seed, params } => Ok(oct_anneal(g, *seed, params)),
            Strategy::Genetic { seed, params } => Ok(oct_genetic(g, *seed, params)),
            Strategy::Brute { bound } => brute_force_oct(g, *bound),
            Strategy::Portfolio { seed, par } => portfolio(g, *seed, *par),
        }
    }
}

impl Bipartizer for Strategy {
    fn bipartize(&mut self, g: &UGraph) -> Result<OctResult, OctError> {
        self.solve(g)
    }
}

fn portfolio(g: &UGraph, seed: u64, par: Parallelism) -> Result<OctResult, OctError> {
    let members = [
        Strategy::default(),
        Strategy::Greedy,
        Strategy::Anneal {
            seed,
            params: AnnealParams::default(),
        },
        Strategy::Genetic {
            seed,
            params: GeneticParams::default(),
        },
    ];
    let results = par::map(&members, par, |s| s.solve(g));
    let mut best: Option<OctResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.len() < b.len()) {
            best = Some(r);
        }
    }
    Ok(best.expect("portfolio is non-empty"))
}

/// Smallest removal set through the SAT reduction, starting from `k = 0`.
pub fn min_oct_exact(g: &UGraph, search: KSearch, backend: &SatBackend) -> Result<OctResult, OctError> {
    let n = g.vertex_count();
    let mut stats = OctStats::default();
    if bipartite_check(g, &[]).is_bipartite() {
        stats.k_tried.push(0);
        return Ok(OctResult {
            removed: Vec::new(),
            method: OctMethod::SatExact,
            optimal: true,
            stats,
        });
    }
    let attempt = |k: usize, stats: &mut OctStats| -> Result<Option<Vec<usize>>, OctError> {
        stats.k_tried.push(k);
        stats.iterations += 1;
        let cnf = encode_oct(g, k);
        match backend.solve(&cnf)? {
            SatOutcome::Unsat => Ok(None),
            SatOutcome::Sat(model) => {
                if !cnf.evaluate(&model) {
                    return Err(OctError::BackendFailure("model violates the CNF".into()));
                }
                let d = cnf::decode_oct(cnf.var_map().expect("encoded"), &model);
                Ok(Some(d.removed))
            }
        }
    };
    // k = 0 is unsatisfiable: the graph is not bipartite.
    let removed = match search {
        KSearch::Linear => {
            let mut found = None;
            for k in 1..=n {
                if let Some(r) = attempt(k, &mut stats)? {
                    found = Some(r);
                    break;
                }
            }
            found.ok_or_else(|| OctError::BackendFailure("no k ≤ n is satisfiable".into()))?
        }
        KSearch::Binary => {
            // invariant: lo unsatisfiable, hi satisfiable with model `best`
            let (mut lo, mut hi) = (0usize, n);
            let mut best = attempt(hi, &mut stats)?
                .ok_or_else(|| OctError::BackendFailure("k = n reported unsatisfiable".into()))?;
            hi = hi.min(best.len());
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                match attempt(mid, &mut stats)? {
                    Some(r) => {
                        hi = r.len().min(mid);
                        best = r;
                    }
                    None => lo = mid,
                }
            }
            best
        }
    };
    if !is_bipartite_without(g, &removed) {
        return Err(OctError::BackendFailure("decoded set does not bipartize".into()));
    }
    Ok(OctResult {
        removed,
        method: OctMethod::SatExact,
        optimal: true,
        stats,
    })
}

/// Drops removed vertices one at a time, in ascending order, whenever the
/// graph stays bipartite without them. A single pass reaches the fixpoint:
/// a vertex that cannot be returned now cannot be returned once more
/// vertices are back.
pub fn peel_to_minimal(g: &UGraph, removed: &[usize]) -> Vec<usize> {
    let mut mask = removal_mask(g.vertex_count(), removed);
    let mut sorted = removed.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &v in &sorted {
        mask[v] = false;
        if !bipartite_check(g, &mask).is_bipartite() {
            mask[v] = true;
        }
    }
    (0..g.vertex_count()).filter(|&v| mask[v]).collect()
}

/// True iff `removed` bipartizes `g` and no single vertex can be returned.
pub fn is_inclusion_minimal(g: &UGraph, removed: &[usize]) -> bool {
    let mut mask = removal_mask(g.vertex_count(), removed);
    if !bipartite_check(g, &mask).is_bipartite() {
        return false;
    }
    removed.iter().all(|&v| {
        mask[v] = false;
        let still = bipartite_check(g, &mask).is_bipartite();
        mask[v] = true;
        !still
    })
}

pub const DEFAULT_BRUTE_BOUND: usize = 20;

pub fn brute_force_oct(g: &UGraph, bound: usize) -> Result<OctResult, OctError> {
    brute_force_oct_with(g, bound, Parallelism::default())
}

/// Exhaustive search by increasing cardinality; returns the
/// lexicographically first minimum set.
pub fn brute_force_oct_with(g: &UGraph, bound: usize, par: Parallelism) -> Result<OctResult, OctError> {
    let n = g.vertex_count();
    if n > bound {
        return Err(OctError::TooLarge { n, bound });
    }
    let mut tested = 0u64;
    for k in 0..=n {
        if k == 0 {
            tested += 1;
            if bipartite_check(g, &[]).is_bipartite() {
                return Ok(brute_result(Vec::new(), tested));
            }
            continue;
        }
        // split the k-subsets by their smallest element
        let found = par::find_map_first(n, par, |first| {
            let mut comb: Vec<usize> = (first..first + k).collect();
            if *comb.last()? >= n {
                return None;
            }
            let mut mask = vec![false; n];
            loop {
                mask.iter_mut().for_each(|m| *m = false);
                for &v in &comb {
                    mask[v] = true;
                }
                if let Bipartition::Parts(..) = bipartite_check(g, &mask) {
                    return Some(comb);
                }
                if !next_combination(&mut comb[1..], n) {
                    return None;
                }
            }
        });
        tested += binomial(n, k);
        if let Some(removed) = found {
            return Ok(brute_result(removed, tested));
        }
    }
    unreachable!("removing every vertex leaves a bipartite graph")
}

fn brute_result(removed: Vec<usize>, tested: u64) -> OctResult {
    OctResult {
        removed,
        method: OctMethod::Brute,
        optimal: true,
        stats: OctStats {
            iterations: tested,
            k_tried: Vec::new(),
        },
    }
}

/// Advances an increasing sequence over `..n` in lexicographic order.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - (k - i) {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k as u64 {
        r = r * (n as u64 - i) / (i + 1);
    }
    r
}
