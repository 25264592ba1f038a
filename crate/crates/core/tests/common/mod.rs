//! Reference implementations used only by the tests. They are deliberately
//! naive and share no code paths with the library beyond the order type.
#![allow(dead_code)]

use dimdraw::graph::UGraph;
use dimdraw::order::{ElemId, OrderRelation};
use dimdraw::tig::build_tig;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random order on `n` elements: a random DAG over a shuffled labelling.
pub fn random_order(rng: &mut impl Rng, n: usize, density: f64) -> OrderRelation {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    OrderRelation::from_id_pairs((0..n).map(|i| format!("e{i}")), pairs).unwrap()
}

/// `count` random orders with 1 to `max_n` elements.
pub fn order_suite(seed: u64, count: usize, max_n: usize) -> Vec<OrderRelation> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=max_n);
            let d = r.gen_range(0.05..0.7);
            random_order(&mut r, n, d)
        })
        .collect()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> UGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UGraph::from_edges(n, edges)
}

/// Plain adjacency matrix of a graph.
pub fn adjacency(g: &UGraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut m = vec![vec![false; n]; n];
    for (u, row) in m.iter_mut().enumerate() {
        for &v in g.neighbors(u) {
            row[v] = true;
        }
    }
    m
}

/// Two-colouring by depth-first search over the kept vertices.
pub fn oracle_bipartite(adj: &[Vec<bool>], keep: &[bool]) -> bool {
    let n = adj.len();
    let mut color = vec![-1i8; n];
    for s in 0..n {
        if !keep[s] || color[s] >= 0 {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if adj[u][v] && keep[v] {
                    if color[v] < 0 {
                        color[v] = 1 - color[u];
                        stack.push(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Minimum odd cycle transversal size by subset enumeration.
pub fn oracle_min_oct(g: &UGraph) -> usize {
    let adj = adjacency(g);
    let n = adj.len();
    for k in 0..=n {
        let mut found = false;
        for_each_subset(n, k, &mut |s| {
            let mut keep = vec![true; n];
            for &v in s {
                keep[v] = false;
            }
            found = oracle_bipartite(&adj, &keep);
            found
        });
        if found {
            return k;
        }
    }
    n
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns true.
pub fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            if rec(v + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Strict relation of an order as a matrix.
pub fn strict_matrix(o: &OrderRelation) -> Vec<Vec<bool>> {
    let n = o.len();
    (0..n).map(|a| (0..n).map(|b| o.lt(a, b)).collect()).collect()
}

/// Whether the digraph `rel` has a directed cycle.
pub fn has_cycle(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    let mut state = vec![0u8; n];
    fn visit(u: usize, rel: &[Vec<bool>], state: &mut [u8]) -> bool {
        state[u] = 1;
        for v in 0..rel.len() {
            if rel[u][v] && (state[v] == 1 || (state[v] == 0 && visit(v, rel, state))) {
                return true;
            }
        }
        state[u] = 2;
        false
    }
    (0..n).any(|u| state[u] == 0 && visit(u, rel, &mut state))
}

/// Two incomparable pairs are incompatible when inserting both creates a cycle.
pub fn oracle_incompatible(o: &OrderRelation, p: (ElemId, ElemId), q: (ElemId, ElemId)) -> bool {
    let mut rel = strict_matrix(o);
    rel[p.0][p.1] = true;
    rel[q.0][q.1] = true;
    has_cycle(&rel)
}

/// All linear extensions, as position vectors.
pub fn linear_extensions(rel: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = rel.len();
    let mut out = Vec::new();
    let mut pos = vec![usize::MAX; n];
    fn rec(k: usize, rel: &[Vec<bool>], pos: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = rel.len();
        if k == n {
            out.push(pos.clone());
            return;
        }
        for x in 0..n {
            if pos[x] == usize::MAX && (0..n).all(|y| !rel[y][x] || pos[y] != usize::MAX) {
                pos[x] = k;
                rec(k + 1, rel, pos, out);
                pos[x] = usize::MAX;
            }
        }
    }
    rec(0, rel, &mut pos, &mut out);
    out
}

fn transitive(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    (0..n).all(|a| (0..n).all(|b| !rel[a][b] || (0..n).all(|c| !rel[b][c] || rel[a][c])))
}

/// A 2-realizer exists: for some linear extension `L1`, ordering every
/// incomparable pair against `L1` gives a second linear order.
pub fn oracle_two_dimensional(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    linear_extensions(rel).iter().any(|pos1| {
        let l2: Vec<Vec<bool>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| a != b && (rel[a][b] || (!rel[b][a] && pos1[b] < pos1[a])))
                    .collect()
            })
            .collect();
        transitive(&l2)
    })
}

/// Size of a smallest set `C` of incomparable pairs such that `≤ ∪ C` is
/// itself an order of dimension at most two. `None` above `max_size`.
pub fn oracle_min_two_dim_extension(o: &OrderRelation, max_size: usize) -> Option<usize> {
    let base = strict_matrix(o);
    let n = o.len();
    let inc: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !base[a][b] && !base[b][a])
        .collect();
    for size in 0..=max_size.min(inc.len()) {
        let mut found = false;
        for_each_subset(inc.len(), size, &mut |chosen| {
            for dirs in 0..1u32 << size {
                let mut rel = base.clone();
                for (bit, &i) in chosen.iter().enumerate() {
                    let (a, b) = inc[i];
                    if dirs >> bit & 1 == 1 {
                        rel[a][b] = true;
                    } else {
                        rel[b][a] = true;
                    }
                }
                if transitive(&rel) && oracle_two_dimensional(&rel) {
                    found = true;
                    return true;
                }
            }
            false
        });
        if found {
            return Some(size);
        }
    }
    None
}

/// Every `a < b` of `o` is a strict grid dominance and rises in the plane.
pub fn dominance_violations(d: &dimdraw::GridDrawing, o: &OrderRelation) -> Vec<String> {
    let mut out = Vec::new();
    for (a, b) in o.strict_pairs().iter() {
        let (ca, cb) = (d.coords[a], d.coords[b]);
        if !(ca.0 < cb.0 && ca.1 < cb.1) {
            out.push(format!("grid {a} < {b}"));
        }
    }
    for (a, b) in d.cover_edges.iter() {
        if d.plane[a].y >= d.plane[b].y {
            out.push(format!("edge {a} -> {b} does not rise"));
        }
    }
    out
}

/// Extension invariants: `≤ ∪ C` closes to a valid order, `C` is
/// antisymmetric and made of incomparable pairs.
pub fn extension_violations(trace: &dimdraw::ExtensionTrace, o: &OrderRelation) -> Vec<String> {
    let mut out = Vec::new();
    if !trace.pairs.is_disjoint(&trace.pairs.reversed()) {
        out.push("C meets its inverse".into());
    }
    for (a, b) in trace.pairs.iter() {
        if o.comparable(a, b) {
            out.push(format!("({a},{b}) is comparable"));
        }
    }
    let mut rel = strict_matrix(o);
    for (a, b) in trace.pairs.iter() {
        rel[a][b] = true;
    }
    if has_cycle(&rel) {
        out.push("closure of ≤ ∪ C is not antisymmetric".into());
    }
    if !trace.extended.validate() || trace.extended != o.with_pairs(&trace.pairs).unwrap() {
        out.push("extended order does not match".into());
    }
    out
}

/// Nine elements whose tig has an inclusion-minimal odd cycle transversal
/// that leaves `≤ ∪ C` three-dimensional, together with that removal set
/// as incomparable pairs.
pub fn multi_pass_order() -> (OrderRelation, Vec<(ElemId, ElemId)>) {
    let covers = [
        (0, 3),
        (0, 5),
        (1, 3),
        (1, 4),
        (1, 6),
        (2, 3),
        (2, 6),
        (2, 7),
        (4, 8),
        (5, 8),
        (6, 8),
    ];
    let o = OrderRelation::from_id_pairs((0..9).map(|i| format!("e{i}")), covers).unwrap();
    (o, vec![(3, 4), (6, 0)])
}

/// Indices of the given pairs among the tig vertices of `o`.
pub fn tig_indices(o: &OrderRelation, pairs: &[(ElemId, ElemId)]) -> Vec<usize> {
    let t = build_tig(o);
    let mut idx: Vec<usize> = pairs
        .iter()
        .map(|&(a, b)| t.index_of(dimdraw::tig::IncPair::new(a, b)).expect("incomparable pair"))
        .collect();
    idx.sort_unstable();
    idx
}

/// Every order on `n` elements whose labelling is a linear extension, one
/// per distinct relation. Covers all orders on `n` elements up to isomorphism.
pub fn all_naturally_labelled_orders(n: usize) -> Vec<OrderRelation> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << slots.len() {
        let pairs = slots
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &p)| p);
        let o = OrderRelation::from_id_pairs((0..n).map(|i| format!("e{i}")), pairs).unwrap();
        if seen.insert(o.strict_pairs().to_vec()) {
            out.push(o);
        }
    }
    out
}
