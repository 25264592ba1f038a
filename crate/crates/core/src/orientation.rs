//! Comparability structure, transitive orientation and conjugate orders.
//!
//! Transitive orientation uses implication-class forcing on a shrinking edge
//! set: pick the smallest unoriented edge, orient it from the lower to the
//! higher vertex id, orient everything its implication class forces, remove
//! the class and repeat. An edge forced both ways means the graph has no
//! transitive orientation. The result is always checked with
//! [`verify_orientation`] before it is returned.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::bitmatrix::BitMatrix;
use crate::order::{ElemId, LinearExtension, OrderError, OrderRelation, PairSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("orientation does not cover the edge set exactly")]
    EdgeMismatch,
}

/// Loop-free undirected graph with dense adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: BitMatrix,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = BitMatrix::new(n);
        for (u, v) in edges {
            if u != v {
                adj.set(u, v, true);
                adj.set(v, u, true);
            }
        }
        let edges = (0..n)
            .flat_map(|u| adj.ones_in_row(u).filter(move |&v| v > u).map(move |v| (u, v)))
            .collect();
        SimpleGraph { adj, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.size()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    /// Edges `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.ones_in_row(u)
    }
}

/// One direction per edge; `(u, v)` means `u → v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Orientation {
    arcs: BTreeSet<(usize, usize)>,
}

impl Orientation {
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }
}

impl FromIterator<(usize, usize)> for Orientation {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        Orientation {
            arcs: iter.into_iter().collect(),
        }
    }
}

/// Edges between incomparable elements.
pub fn cocomparability_graph(o: &OrderRelation) -> SimpleGraph {
    let n = o.len();
    SimpleGraph::from_edges(
        n,
        (0..n).flat_map(|a| (a + 1..n).filter(move |&b| !o.comparable(a, b)).map(move |b| (a, b))),
    )
}

/// Edges between distinct comparable elements.
pub fn comparability_graph(o: &OrderRelation) -> SimpleGraph {
    let n = o.len();
    SimpleGraph::from_edges(
        n,
        (0..n).flat_map(|a| (a + 1..n).filter(move |&b| o.comparable(a, b)).map(move |b| (a, b))),
    )
}

const NONE: u8 = 0;
const FORWARD: u8 = 1; // low id → high id
const BACKWARD: u8 = 2;

pub fn transitive_orientation(g: &SimpleGraph) -> Option<Orientation> {
    let n = g.vertex_count();
    // live[u][v]: edge still in the shrinking edge set
    let mut live = g.adj.clone();
    let mut state = vec![NONE; n * n];
    let key = |u: usize, v: usize| if u < v { u * n + v } else { v * n + u };
    let dir_of = |u: usize, v: usize| if u < v { FORWARD } else { BACKWARD };

    for &(s, t) in g.edges() {
        if state[key(s, t)] != NONE {
            continue;
        }
        // implication class of s → t within the live edges
        let mut class = Vec::new();
        let mut queue = VecDeque::new();
        state[key(s, t)] = FORWARD;
        class.push((s, t));
        queue.push_back((s, t));
        while let Some((a, b)) = queue.pop_front() {
            // a → b forces a → c when b–c is not a live edge,
            // and c → b when a–c is not a live edge.
            let mut forced = Vec::new();
            for c in live.ones_in_row(a) {
                if c != b && !live.get(b, c) {
                    forced.push((a, c));
                }
            }
            for c in live.ones_in_row(b) {
                if c != a && !live.get(a, c) {
                    forced.push((c, b));
                }
            }
            for (x, y) in forced {
                let slot = &mut state[key(x, y)];
                let want = dir_of(x, y);
                if *slot == NONE {
                    *slot = want;
                    class.push((x, y));
                    queue.push_back((x, y));
                } else if *slot != want {
                    return None;
                }
            }
        }
        for (x, y) in class {
            live.set(x, y, false);
            live.set(y, x, false);
        }
    }

    let orientation: Orientation = g
        .edges()
        .iter()
        .map(|&(u, v)| match state[key(u, v)] {
            FORWARD => (u, v),
            _ => (v, u),
        })
        .collect();
    match verify_orientation(g, &orientation) {
        Ok(true) => Some(orientation),
        _ => None,
    }
}

/// True iff `d` is acyclic and transitive within the edges of `g`.
pub fn verify_orientation(g: &SimpleGraph, d: &Orientation) -> Result<bool, OrientationError> {
    let n = g.vertex_count();
    if d.len() != g.edges().len() {
        return Err(OrientationError::EdgeMismatch);
    }
    let mut arc = BitMatrix::new(n);
    for (u, v) in d.arcs() {
        if u >= n || v >= n || !g.has_edge(u, v) || arc.get(v, u) {
            return Err(OrientationError::EdgeMismatch);
        }
        arc.set(u, v, true);
    }
    // transitive: a → b → c implies a → c; then acyclic iff no 2-cycles
    // (a longer cycle would close into one through transitivity)
    for a in 0..n {
        for b in arc.ones_in_row(a) {
            for c in arc.ones_in_row(b) {
                if !arc.get(a, c) {
                    return Ok(false);
                }
            }
        }
    }
    Ok((0..n).all(|a| arc.ones_in_row(a).all(|b| !arc.get(b, a))))
}

/// An order whose comparability graph is the cocomparability graph of `o`,
/// or `None` when `o` has dimension greater than two.
pub fn compute_conjugate_order(o: &OrderRelation) -> Option<OrderRelation> {
    let co = cocomparability_graph(o);
    let orientation = transitive_orientation(&co)?;
    let pairs: PairSet = orientation.arcs().collect();
    Some(
        OrderRelation::from_pairs(o.ground_arc().clone(), pairs)
            .expect("a transitive orientation is acyclic"),
    )
}

pub fn is_two_dimensional(o: &OrderRelation) -> bool {
    compute_conjugate_order(o).is_some()
}

/// The realizer `{≤ ∪ ≤_C, ≤ ∪ ≥_C}`.
pub fn realizer_from_conjugate(
    o: &OrderRelation,
    conjugate: &OrderRelation,
) -> Result<(LinearExtension, LinearExtension), OrderError> {
    if o.ground() != conjugate.ground() {
        return Err(OrderError::GroundMismatch);
    }
    let mut up = o.strict_pairs();
    let mut down = up.clone();
    for (a, b) in conjugate.strict_pairs().iter() {
        up.insert(a, b);
        down.insert(b, a);
    }
    let l1 = LinearExtension::new(OrderRelation::from_pairs(o.ground_arc().clone(), up)?)?;
    let l2 = LinearExtension::new(OrderRelation::from_pairs(o.ground_arc().clone(), down)?)?;
    Ok((l1, l2))
}

/// Convenience: realizer of a two-dimensional order.
pub fn two_realizer(o: &OrderRelation) -> Option<(LinearExtension, LinearExtension)> {
    let c = compute_conjugate_order(o)?;
    realizer_from_conjugate(o, &c).ok()
}

/// Rank coordinates from a realizer, element by element.
pub fn realizer_ranks(l1: &LinearExtension, l2: &LinearExtension) -> Vec<(ElemId, ElemId)> {
    l1.ranks().iter().copied().zip(l2.ranks().iter().copied()).collect()
}
