//! Finite ordered sets.
//!
//! An [`OrderRelation`] is stored as a dense reflexive incidence matrix over a
//! [`GroundSet`] of labelled elements. Construction always takes the
//! reflexive-transitive closure of the generating pairs and rejects anything
//! that is not antisymmetric, so every value of the type is a valid order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::bitmatrix::BitMatrix;

/// Dense element id, `0..n`.
pub type ElemId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("relation is not antisymmetric: cycle {}", .0.join(" < "))]
    Cycle(Vec<String>),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("element id {0} is out of range")]
    UnknownId(ElemId),
    #[error("ground set is empty")]
    EmptyGround,
    #[error("relations are defined on different ground sets")]
    GroundMismatch,
    #[error("relation is not linear: `{0}` and `{1}` are incomparable")]
    NotLinear(String, String),
}

/// Labelled elements with a dense index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, ElemId>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(OrderError::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: ElemId) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Option<ElemId> {
        self.index.get(label).copied()
    }
}

/// A set of ordered element pairs, iterated in lexicographic order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PairSet(BTreeSet<(ElemId, ElemId)>);

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: ElemId, b: ElemId) -> bool {
        self.0.insert((a, b))
    }

    pub fn contains(&self, a: ElemId, b: ElemId) -> bool {
        self.0.contains(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElemId, ElemId)> + '_ {
        self.0.iter().copied()
    }

    /// `C⁻¹`: every pair flipped.
    pub fn reversed(&self) -> PairSet {
        self.iter().map(|(a, b)| (b, a)).collect()
    }

    pub fn is_disjoint(&self, other: &PairSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn to_vec(&self) -> Vec<(ElemId, ElemId)> {
        self.iter().collect()
    }
}

impl FromIterator<(ElemId, ElemId)> for PairSet {
    fn from_iter<T: IntoIterator<Item = (ElemId, ElemId)>>(iter: T) -> Self {
        PairSet(iter.into_iter().collect())
    }
}

impl Extend<(ElemId, ElemId)> for PairSet {
    fn extend<T: IntoIterator<Item = (ElemId, ElemId)>>(&mut self, iter: T) {
        self.0.extend(iter)
    }
}

/// A reflexive, antisymmetric and transitive relation on a ground set.
#[derive(Debug, Clone)]
pub struct OrderRelation {
    ground: Arc<GroundSet>,
    leq: BitMatrix,
    generators: PairSet,
}

impl PartialEq for OrderRelation {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.leq == other.leq
    }
}

impl Eq for OrderRelation {}

/// Builds an order from labels and label pairs `(a, b)` meaning `a ≤ b`.
pub fn build_order<S: AsRef<str>>(
    labels: &[S],
    pairs: &[(S, S)],
) -> Result<OrderRelation, OrderError> {
    let ground = GroundSet::new(labels.iter().map(|s| s.as_ref().to_string()))?;
    let mut ids = PairSet::new();
    for (a, b) in pairs {
        let ia = ground
            .id(a.as_ref())
            .ok_or_else(|| OrderError::UnknownLabel(a.as_ref().to_string()))?;
        let ib = ground
            .id(b.as_ref())
            .ok_or_else(|| OrderError::UnknownLabel(b.as_ref().to_string()))?;
        ids.insert(ia, ib);
    }
    OrderRelation::from_pairs(Arc::new(ground), ids)
}

impl OrderRelation {
    /// Closure of `pairs` over `ground`.
    pub fn from_pairs(ground: Arc<GroundSet>, pairs: PairSet) -> Result<Self, OrderError> {
        let n = ground.len();
        if n == 0 {
            return Err(OrderError::EmptyGround);
        }
        let mut leq = BitMatrix::identity(n);
        for (a, b) in pairs.iter() {
            if a >= n {
                return Err(OrderError::UnknownId(a));
            }
            if b >= n {
                return Err(OrderError::UnknownId(b));
            }
            leq.set(a, b, true);
        }
        leq.transitive_closure();
        for i in 0..n {
            for j in leq.ones_in_row(i) {
                if j != i && leq.get(j, i) {
                    let cycle = find_cycle(n, &pairs, i, j)
                        .into_iter()
                        .map(|e| ground.label(e).to_string())
                        .collect();
                    return Err(OrderError::Cycle(cycle));
                }
            }
        }
        Ok(OrderRelation {
            ground,
            leq,
            generators: pairs,
        })
    }

    /// Order on `0..n` labelled with the given labels.
    pub fn from_id_pairs<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        pairs: impl IntoIterator<Item = (ElemId, ElemId)>,
    ) -> Result<Self, OrderError> {
        let ground = GroundSet::new(labels)?;
        Self::from_pairs(Arc::new(ground), pairs.into_iter().collect())
    }

    /// The closure of `self ∪ extra` on the same ground set.
    pub fn with_pairs(&self, extra: &PairSet) -> Result<OrderRelation, OrderError> {
        let mut pairs = self.strict_pairs();
        pairs.extend(extra.iter());
        OrderRelation::from_pairs(self.ground.clone(), pairs)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub(crate) fn ground_arc(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn label(&self, id: ElemId) -> &str {
        self.ground.label(id)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.leq
    }

    /// The pairs the relation was generated from, before closure.
    pub fn generators(&self) -> &PairSet {
        &self.generators
    }

    #[inline]
    pub fn leq(&self, a: ElemId, b: ElemId) -> bool {
        self.leq.get(a, b)
    }

    #[inline]
    pub fn lt(&self, a: ElemId, b: ElemId) -> bool {
        a != b && self.leq.get(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: ElemId, b: ElemId) -> bool {
        self.leq.get(a, b) || self.leq.get(b, a)
    }

    /// Number of ordered pairs in the relation, diagonal included.
    pub fn relation_size(&self) -> usize {
        self.leq.count_ones()
    }

    /// All `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> PairSet {
        (0..self.len())
            .flat_map(|a| {
                self.leq
                    .ones_in_row(a)
                    .filter(move |&b| b != a)
                    .map(move |b| (a, b))
            })
            .collect()
    }

    /// Pairs `a < b` with no `c` strictly between them.
    pub fn cover_relation(&self) -> PairSet {
        let n = self.len();
        let mut covers = PairSet::new();
        for a in 0..n {
            let above: Vec<ElemId> = self.leq.ones_in_row(a).filter(|&b| b != a).collect();
            for &b in &above {
                let intermediate = above.iter().any(|&c| c != b && self.leq(c, b));
                if !intermediate {
                    covers.insert(a, b);
                }
            }
        }
        covers
    }

    /// Ordered pairs `(a, b)`, `a ≠ b`, with neither `a ≤ b` nor `b ≤ a`.
    pub fn incomparable_pairs(&self) -> PairSet {
        let n = self.len();
        let mut out = PairSet::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && !self.comparable(a, b) {
                    out.insert(a, b);
                }
            }
        }
        out
    }

    pub fn is_linear(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| self.comparable(a, b)))
    }

    /// Recomputes closure and antisymmetry from scratch. Always true for
    /// values built through this module; used as a check in tests.
    pub fn validate(&self) -> bool {
        let n = self.len();
        let mut closed = self.leq.clone();
        closed.transitive_closure();
        closed == self.leq
            && (0..n).all(|i| self.leq.get(i, i))
            && (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq(i, j) && self.leq(j, i))))
    }

    /// Dual order with the same ground set.
    pub fn dual(&self) -> OrderRelation {
        OrderRelation {
            ground: self.ground.clone(),
            leq: self.leq.transpose(),
            generators: self.generators.reversed(),
        }
    }

    /// Number of elements strictly below `x`.
    pub fn down_count(&self, x: ElemId) -> usize {
        (0..self.len()).filter(|&y| self.lt(y, x)).count()
    }
}

/// Shortest generator path `from → to` followed by `to → from`.
fn find_cycle(n: usize, pairs: &PairSet, from: ElemId, to: ElemId) -> Vec<ElemId> {
    let mut adj = vec![Vec::new(); n];
    for (a, b) in pairs.iter() {
        if a != b {
            adj[a].push(b);
        }
    }
    let path = |s: ElemId, t: ElemId| -> Vec<ElemId> {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &v in &adj[u] {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut out = vec![t];
        let mut cur = t;
        while cur != s {
            cur = prev[cur];
            out.push(cur);
        }
        out.reverse();
        out
    };
    let mut cycle = path(from, to);
    let back = path(to, from);
    cycle.extend_from_slice(&back[1..]);
    cycle
}

/// A linear order together with the rank of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearExtension {
    order: OrderRelation,
    rank: Vec<usize>,
}

impl LinearExtension {
    pub fn new(order: OrderRelation) -> Result<Self, OrderError> {
        let n = order.len();
        for a in 0..n {
            for b in a + 1..n {
                if !order.comparable(a, b) {
                    return Err(OrderError::NotLinear(
                        order.label(a).to_string(),
                        order.label(b).to_string(),
                    ));
                }
            }
        }
        let rank = (0..n).map(|x| order.down_count(x)).collect();
        Ok(LinearExtension { order, rank })
    }

    /// Linear order listing `sequence` from bottom to top.
    pub fn from_sequence(ground: &OrderRelation, sequence: &[ElemId]) -> Result<Self, OrderError> {
        let pairs = sequence.windows(2).map(|w| (w[0], w[1])).collect();
        let o = OrderRelation::from_pairs(ground.ground_arc().clone(), pairs)?;
        Self::new(o)
    }

    pub fn order(&self) -> &OrderRelation {
        &self.order
    }

    /// Position of `x`: the number of elements below it.
    pub fn rank(&self, x: ElemId) -> usize {
        self.rank[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Elements from bottom to top.
    pub fn sequence(&self) -> Vec<ElemId> {
        let mut seq = vec![0; self.rank.len()];
        for (x, &r) in self.rank.iter().enumerate() {
            seq[r] = x;
        }
        seq
    }

    pub fn extends(&self, o: &OrderRelation) -> bool {
        let n = o.len();
        n == self.order.len() && (0..n).all(|a| o.leq.ones_in_row(a).all(|b| self.order.leq(a, b)))
    }
}

/// Intersection of linear orders on a common ground set.
pub fn intersect_linear(ls: &[LinearExtension]) -> Result<OrderRelation, OrderError> {
    let first = ls.first().ok_or(OrderError::EmptyGround)?;
    let mut leq = first.order.leq.clone();
    for l in &ls[1..] {
        if l.order.ground != first.order.ground {
            return Err(OrderError::GroundMismatch);
        }
        leq = leq.and(&l.order.leq);
    }
    let n = leq.size();
    let generators = (0..n)
        .flat_map(|a| leq.ones_in_row(a).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    // The intersection of orders is an order, no closure needed.
    Ok(OrderRelation {
        ground: first.order.ground.clone(),
        leq,
        generators,
    })
}

/// Standard example `Sₙ`: `aᵢ < bⱼ` exactly when `i ≠ j`.
pub fn standard_example(n: usize) -> OrderRelation {
    assert!(n >= 1);
    let labels = (1..=n)
        .map(|i| format!("a{i}"))
        .chain((1..=n).map(|i| format!("b{i}")));
    let pairs = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, n + j)));
    OrderRelation::from_id_pairs(labels, pairs).expect("standard example is an order")
}

/// Subsets of `{1..n}` ordered by inclusion. Element `i` is the subset with
/// bitmask `i`.
pub fn boolean_lattice(n: usize) -> OrderRelation {
    let size = 1usize << n;
    let label = |mask: usize| {
        let items: Vec<String> = (0..n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (b + 1).to_string())
            .collect();
        format!("{{{}}}", items.join(","))
    };
    let pairs =
        (0..size).flat_map(|m| (0..n).filter(move |b| m >> b & 1 == 0).map(move |b| (m, m | 1 << b)));
    OrderRelation::from_id_pairs((0..size).map(label), pairs).expect("boolean lattice is an order")
}

pub fn chain(n: usize) -> OrderRelation {
    assert!(n >= 1);
    OrderRelation::from_id_pairs((0..n).map(|i| format!("c{i}")), (1..n).map(|i| (i - 1, i)))
        .expect("chain is an order")
}

pub fn antichain(n: usize) -> OrderRelation {
    assert!(n >= 1);
    OrderRelation::from_id_pairs((0..n).map(|i| format!("x{i}")), std::iter::empty())
        .expect("antichain is an order")
}

/// Product of an `m`-chain and an `n`-chain. Element `i·n + j` is `(i, j)`.
pub fn grid(m: usize, n: usize) -> OrderRelation {
    assert!(m >= 1 && n >= 1);
    let id = move |i: usize, j: usize| i * n + j;
    let labels = (0..m).flat_map(|i| (0..n).map(move |j| format!("g{i}_{j}")));
    let pairs = (0..m).flat_map(|i| {
        (0..n).flat_map(move |j| {
            let up = (i + 1 < m).then(|| (id(i, j), id(i + 1, j)));
            let right = (j + 1 < n).then(|| (id(i, j), id(i, j + 1)));
            up.into_iter().chain(right)
        })
    });
    OrderRelation::from_id_pairs(labels, pairs).expect("grid is an order")
}
