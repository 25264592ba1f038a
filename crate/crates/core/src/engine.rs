//! The drawing pipeline: extend the order to dimension two, then place every
//! element at its pair of realizer ranks.

use thiserror::Error;

use crate::oct::{Bipartizer, OctError, OctMethod, Strategy};
use crate::order::{ElemId, OrderRelation, PairSet};
use crate::orientation::{compute_conjugate_order, realizer_from_conjugate};
use crate::par::{self, Parallelism};
use crate::tig::build_tig_with;

/// Plane coordinates are stored in hundredths of a grid step so that the
/// collinearity test in [`crate::render`] stays exact after perturbation.
pub const PLANE_SCALE: i64 = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("extended relation is not an order: {0}")]
    OrderViolation(String),
    #[error("no two-dimension extension after {0} passes")]
    PassLimit(usize),
    #[error(transparent)]
    Oct(#[from] OctError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// How the order was extended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionTrace {
    /// Inserted pairs `(a, b)` meaning `a < b` in the extension.
    pub pairs: PairSet,
    pub passes: usize,
    /// Removed tig vertices of every pass, as incomparable pairs before reversal.
    pub removed_per_pass: Vec<Vec<(ElemId, ElemId)>>,
    pub methods: Vec<OctMethod>,
    /// Closure of the original order and `pairs`.
    pub extended: OrderRelation,
    pub conjugate: OrderRelation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    /// Hundredths of a grid step.
    pub x: i64,
    pub y: i64,
}

impl PlanePoint {
    pub fn from_grid(c1: usize, c2: usize) -> Self {
        let (c1, c2) = (c1 as i64, c2 as i64);
        PlanePoint {
            x: (c2 - c1) * PLANE_SCALE,
            y: (c1 + c2) * PLANE_SCALE,
        }
    }

    pub fn to_f64(self) -> (f64, f64) {
        (
            self.x as f64 / PLANE_SCALE as f64,
            self.y as f64 / PLANE_SCALE as f64,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDrawing {
    pub labels: Vec<String>,
    /// Rank of each element in the two linear extensions.
    pub coords: Vec<(usize, usize)>,
    pub plane: Vec<PlanePoint>,
    /// Cover relation of the original order.
    pub cover_edges: PairSet,
    pub extension: ExtensionTrace,
}

impl GridDrawing {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Grid dominance: both ranks strictly smaller.
    pub fn dominated(&self, a: ElemId, b: ElemId) -> bool {
        let (pa, pb) = (self.coords[a], self.coords[b]);
        pa.0 < pb.0 && pa.1 < pb.1
    }
}

pub fn two_dimension_extension<B: Bipartizer + ?Sized>(
    o: &OrderRelation,
    strategy: &mut B,
) -> Result<ExtensionTrace, EngineError> {
    two_dimension_extension_with(o, strategy, Parallelism::default())
}

/// Inserts reversed removal sets until the extended order has a conjugate.
/// `par` only affects how each tig is built.
pub fn two_dimension_extension_with<B: Bipartizer + ?Sized>(
    o: &OrderRelation,
    strategy: &mut B,
    par: Parallelism,
) -> Result<ExtensionTrace, EngineError> {
    let incomparable = o.incomparable_pairs();
    let limit = incomparable.len() / 2 + 1;
    let mut pairs = PairSet::new();
    let mut removed_per_pass = Vec::new();
    let mut methods = Vec::new();
    let mut extended = o.clone();
    loop {
        if let Some(conjugate) = compute_conjugate_order(&extended) {
            return Ok(ExtensionTrace {
                passes: removed_per_pass.len(),
                pairs,
                removed_per_pass,
                methods,
                extended,
                conjugate,
            });
        }
        if removed_per_pass.len() >= limit {
            return Err(EngineError::PassLimit(limit));
        }
        let tig = build_tig_with(&extended, par);
        let result = strategy.bipartize(tig.graph())?;
        if result.is_empty() {
            return Err(EngineError::Invariant(
                "bipartite tig but no conjugate order".into(),
            ));
        }
        if !tig.bipartite_check(&result.removed).is_bipartite() {
            return Err(EngineError::Invariant(format!(
                "{:?} removal set does not bipartize the tig",
                result.method
            )));
        }
        let removed: Vec<(ElemId, ElemId)> = result
            .removed
            .iter()
            .map(|&v| {
                let p = tig.vertex(v);
                (p.a, p.b)
            })
            .collect();
        for &(a, b) in &removed {
            pairs.insert(b, a);
        }
        if !pairs.is_disjoint(&pairs.reversed()) {
            return Err(EngineError::OrderViolation(
                "a pair was inserted in both directions".into(),
            ));
        }
        if let Some((a, b)) = pairs.iter().find(|&(a, b)| !incomparable.contains(a, b)) {
            return Err(EngineError::Invariant(format!(
                "inserted pair ({}, {}) is comparable in the input",
                o.label(a),
                o.label(b)
            )));
        }
        extended = o
            .with_pairs(&pairs)
            .map_err(|e| EngineError::OrderViolation(e.to_string()))?;
        removed_per_pass.push(removed);
        methods.push(result.method);
    }
}

pub fn compute_coordinates<B: Bipartizer + ?Sized>(
    o: &OrderRelation,
    strategy: &mut B,
) -> Result<GridDrawing, EngineError> {
    compute_coordinates_with(o, strategy, Parallelism::default())
}

pub fn compute_coordinates_with<B: Bipartizer + ?Sized>(
    o: &OrderRelation,
    strategy: &mut B,
    par: Parallelism,
) -> Result<GridDrawing, EngineError> {
    let extension = two_dimension_extension_with(o, strategy, par)?;
    let (l1, l2) = realizer_from_conjugate(&extension.extended, &extension.conjugate)
        .map_err(|e| EngineError::Invariant(format!("realizer: {e}")))?;
    let coords: Vec<(usize, usize)> = (0..o.len()).map(|x| (l1.rank(x), l2.rank(x))).collect();
    let drawing = GridDrawing {
        labels: o.ground().labels().to_vec(),
        plane: coords.iter().map(|&(a, b)| PlanePoint::from_grid(a, b)).collect(),
        coords,
        cover_edges: o.cover_relation(),
        extension,
    };
    for (a, b) in o.strict_pairs().iter() {
        if !drawing.dominated(a, b) {
            return Err(EngineError::Invariant(format!(
                "{} < {} is not a grid dominance",
                o.label(a),
                o.label(b)
            )));
        }
    }
    Ok(drawing)
}

/// Draws many orders with independent strategy copies.
pub fn draw_many(
    orders: &[OrderRelation],
    strategy: &Strategy,
    par: Parallelism,
) -> Vec<Result<GridDrawing, EngineError>> {
    par::map(orders, par, |o| {
        compute_coordinates_with(o, &mut strategy.clone(), Parallelism::Sequential)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakDominance {
    /// Ordered pairs incomparable in the order but dominated in the grid.
    pub false_comparabilities: usize,
    /// Ordered pairs `a < b` of the order.
    pub true_comparabilities: usize,
}

pub fn weak_dominance_stats(d: &GridDrawing, o: &OrderRelation) -> WeakDominance {
    let n = o.len();
    let mut stats = WeakDominance {
        false_comparabilities: 0,
        true_comparabilities: 0,
    };
    for a in 0..n {
        for b in 0..n {
            if a == b || !d.dominated(a, b) {
                continue;
            }
            if o.lt(a, b) {
                stats.true_comparabilities += 1;
            } else {
                stats.false_comparabilities += 1;
            }
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{antichain, chain, grid, standard_example};

    #[test]
    fn chain_of_two() {
        let d = compute_coordinates(&chain(2), &mut Strategy::default()).unwrap();
        assert_eq!(d.coords, vec![(0, 0), (1, 1)]);
        assert_eq!(d.plane, vec![PlanePoint::from_grid(0, 0), PlanePoint { x: 0, y: 200 }]);
        assert_eq!(d.extension.passes, 0);
    }

    #[test]
    fn antichain_of_two() {
        let d = compute_coordinates(&antichain(2), &mut Strategy::default()).unwrap();
        let mut coords = d.coords.clone();
        coords.sort();
        assert_eq!(coords, vec![(0, 1), (1, 0)]);
        assert!(d.plane.iter().all(|p| p.y == 100 && p.x.abs() == 100));
    }

    #[test]
    fn grid_needs_no_pairs() {
        let o = grid(3, 3);
        let d = compute_coordinates(&o, &mut Strategy::default()).unwrap();
        assert!(d.extension.pairs.is_empty());
        assert_eq!(weak_dominance_stats(&d, &o).false_comparabilities, 0);
    }

    #[test]
    fn standard_example_inserts_one_matching_pair() {
        let o = standard_example(3);
        let d = compute_coordinates(&o, &mut Strategy::default()).unwrap();
        let t = &d.extension;
        assert_eq!(t.passes, 1);
        assert_eq!(t.pairs.len(), 1);
        let (a, b) = t.pairs.iter().next().unwrap();
        assert_eq!(o.label(a).strip_prefix('a'), o.label(b).strip_prefix('b'));
        assert_eq!(weak_dominance_stats(&d, &o).false_comparabilities, 1);
    }

    #[test]
    fn empty_removal_set_is_an_invariant_error() {
        let mut calls = 0;
        let mut stubborn = |_: &crate::graph::UGraph| -> Result<crate::oct::OctResult, OctError> {
            calls += 1;
            Ok(crate::oct::OctResult {
                removed: vec![],
                method: OctMethod::Scripted,
                optimal: false,
                stats: Default::default(),
            })
        };
        let err = two_dimension_extension(&standard_example(3), &mut stubborn).unwrap_err();
        assert!(matches!(err, EngineError::Invariant(_)));
        assert_eq!(calls, 1);
    }

    #[test]
    fn batch_matches_single_runs() {
        let orders = vec![chain(3), standard_example(3), grid(2, 3)];
        let batch = draw_many(&orders, &Strategy::default(), Parallelism::Parallel);
        for (o, d) in orders.iter().zip(batch) {
            assert_eq!(d.unwrap(), compute_coordinates(o, &mut Strategy::default()).unwrap());
        }
    }
}
