//! Simple undirected graphs as sorted adjacency lists, and 2-colouring.

use std::collections::VecDeque;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UGraph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl UGraph {
    pub fn new(n: usize) -> Self {
        UGraph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        UGraph { adj, m: m / 2 }
    }

    /// Builds a graph from already symmetric, sorted, loop-free lists.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        debug_assert!(adj
            .iter()
            .enumerate()
            .all(|(u, l)| l.windows(2).all(|w| w[0] < w[1]) && !l.contains(&u)));
        UGraph { adj, m }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }
}

/// Outcome of 2-colouring a graph with some vertices removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    /// Colour classes of the remaining vertices, each ascending.
    Parts(Vec<usize>, Vec<usize>),
    /// Closed walk of odd length; consecutive vertices (and last→first) are
    /// adjacent.
    OddCycle(Vec<usize>),
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Parts(..))
    }
}

/// BFS 2-colouring of `g` minus the vertices flagged in `removed`.
pub fn bipartite_check(g: &UGraph, removed: &[bool]) -> Bipartition {
    let n = g.vertex_count();
    debug_assert!(removed.is_empty() || removed.len() == n);
    let gone = |v: usize| removed.get(v).copied().unwrap_or(false);
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if gone(root) || color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if gone(v) {
                    continue;
                }
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return Bipartition::OddCycle(tree_cycle(u, v, &parent, &depth));
                }
            }
        }
    }
    let (mut p1, mut p2) = (Vec::new(), Vec::new());
    for (v, &c) in color.iter().enumerate() {
        match c {
            0 => p1.push(v),
            1 => p2.push(v),
            _ => {}
        }
    }
    Bipartition::Parts(p1, p2)
}

/// Cycle closed by the non-tree edge `u–v` whose endpoints share a colour.
pub(crate) fn tree_cycle(u: usize, v: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// Convenience: flags from a list of vertices.
pub fn removal_mask(n: usize, removed: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in removed {
        mask[v] = true;
    }
    mask
}

pub fn is_bipartite_without(g: &UGraph, removed: &[usize]) -> bool {
    bipartite_check(g, &removal_mask(g.vertex_count(), removed)).is_bipartite()
}
