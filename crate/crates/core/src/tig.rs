//! The transitive incompatibility graph.
//!
//! Vertices are the ordered incomparable pairs of an order. Two pairs
//! `(a, b)` and `(c, d)` are adjacent when adding both to the order closes a
//! cycle, which happens exactly when `d ≤ a` and `b ≤ c`. The graph is
//! bipartite iff the order has dimension at most two.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{bipartite_check, removal_mask, Bipartition, UGraph};
use crate::order::{ElemId, OrderRelation};
use crate::par::{self, Parallelism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TigError {
    #[error("pair ({0}, {1}) is not incomparable")]
    NotIncomparable(ElemId, ElemId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncPair {
    pub a: ElemId,
    pub b: ElemId,
}

impl IncPair {
    pub fn new(a: ElemId, b: ElemId) -> Self {
        IncPair { a, b }
    }

    pub fn reversed(self) -> Self {
        IncPair { a: self.b, b: self.a }
    }
}

fn check(p: IncPair, o: &OrderRelation) -> Result<(), TigError> {
    if p.a == p.b || p.a >= o.len() || p.b >= o.len() || o.comparable(p.a, p.b) {
        Err(TigError::NotIncomparable(p.a, p.b))
    } else {
        Ok(())
    }
}

/// `p` enforces `q` iff `q` lies in the closure of `≤ ∪ {p}`.
pub fn enforces(p: IncPair, q: IncPair, o: &OrderRelation) -> Result<bool, TigError> {
    check(p, o)?;
    check(q, o)?;
    Ok(o.leq(q.a, p.a) && o.leq(p.b, q.b))
}

/// `p = (a, b)` and `q = (c, d)` are incompatible iff `d ≤ a` and `b ≤ c`.
/// The condition is symmetric in `p` and `q`.
pub fn incompatible(p: IncPair, q: IncPair, o: &OrderRelation) -> Result<bool, TigError> {
    check(p, o)?;
    check(q, o)?;
    Ok(incompatible_unchecked(p, q, o))
}

#[inline]
fn incompatible_unchecked(p: IncPair, q: IncPair, o: &OrderRelation) -> bool {
    o.leq(q.b, p.a) && o.leq(p.b, q.a)
}

#[derive(Debug, Clone)]
pub struct TigGraph {
    order: OrderRelation,
    vertices: Vec<IncPair>,
    index: HashMap<IncPair, usize>,
    graph: UGraph,
}

impl TigGraph {
    pub fn order(&self) -> &OrderRelation {
        &self.order
    }

    /// Incomparable pairs in lexicographic order.
    pub fn vertices(&self) -> &[IncPair] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> IncPair {
        self.vertices[v]
    }

    pub fn index_of(&self, p: IncPair) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn graph(&self) -> &UGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn bipartite_check(&self, removed: &[usize]) -> Bipartition {
        bipartite_check(&self.graph, &removal_mask(self.vertex_count(), removed))
    }

    /// Graphviz text; vertices are labelled `a,b`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tig {\n");
        for (i, p) in self.vertices.iter().enumerate() {
            let label = format!("{},{}", self.order.label(p.a), self.order.label(p.b));
            writeln!(out, "  {i} [label=\"{}\"];", label.replace('"', "\\\"")).unwrap();
        }
        for (u, v) in self.graph.edges() {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_tig(o: &OrderRelation) -> TigGraph {
    build_tig_with(o, Parallelism::default())
}

pub fn build_tig_with(o: &OrderRelation, par: Parallelism) -> TigGraph {
    let vertices: Vec<IncPair> = o
        .incomparable_pairs()
        .iter()
        .map(|(a, b)| IncPair::new(a, b))
        .collect();
    let index: HashMap<IncPair, usize> = vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    // Neighbours of (a, b) are the (c, d) with b ≤ c and d ≤ a.
    let adj = par::map(&vertices, par, |&p| {
        let n = o.len();
        let ups: Vec<ElemId> = (0..n).filter(|&c| o.leq(p.b, c)).collect();
        let downs: Vec<ElemId> = (0..n).filter(|&d| o.leq(d, p.a)).collect();
        let mut nbrs: Vec<usize> = ups
            .iter()
            .flat_map(|&c| downs.iter().map(move |&d| IncPair::new(c, d)))
            .filter(|&q| q != p)
            .filter_map(|q| index.get(&q).copied())
            .collect();
        nbrs.sort_unstable();
        nbrs
    });
    TigGraph {
        order: o.clone(),
        vertices,
        index,
        graph: UGraph::from_sorted_adjacency(adj),
    }
}

/// Quadratic reference construction: tests every pair of vertices.
pub fn build_tig_pairwise(o: &OrderRelation, par: Parallelism) -> TigGraph {
    let vertices: Vec<IncPair> = o
        .incomparable_pairs()
        .iter()
        .map(|(a, b)| IncPair::new(a, b))
        .collect();
    let index = vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let adj = par::map(&vertices, par, |&p| {
        vertices
            .iter()
            .enumerate()
            .filter(|&(_, &q)| q != p && incompatible_unchecked(p, q, o))
            .map(|(j, _)| j)
            .collect()
    });
    TigGraph {
        order: o.clone(),
        vertices,
        index,
        graph: UGraph::from_sorted_adjacency(adj),
    }
}
