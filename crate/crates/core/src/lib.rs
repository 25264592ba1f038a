//! Order diagram layout through minimum two-dimension extensions.
//!
//! An ordered set of dimension two has a natural dominance drawing: every
//! element sits at the pair of its ranks in the two linear extensions of a
//! realizer. For higher-dimensional orders this crate inserts as few
//! incomparable pairs as it can until the order becomes two-dimensional,
//! draws the extended order, and then drops the inserted pairs again.
//!
//! The pipeline is:
//!
//! 1. [`tig::build_tig`] builds the transitive incompatibility graph of the
//!    order. It is bipartite exactly when the order has dimension at most two.
//! 2. An odd cycle transversal of that graph ([`oct`]) is found, either exactly
//!    through a SAT reduction or by a heuristic.
//! 3. The reversed removed pairs are inserted into the order and the loop
//!    repeats until a conjugate order exists ([`engine`]).
//! 4. The realizer built from the conjugate order yields grid coordinates,
//!    which [`render`] turns into SVG, TikZ or JSON.
//!
//! ```
//! use dimdraw::{engine, order, oct::Strategy, render};
//!
//! let s3 = order::standard_example(3);
//! let drawing = engine::compute_coordinates(&s3, &mut Strategy::default()).unwrap();
//! assert_eq!(drawing.extension.pairs.len(), 1);
//! let svg = render::emit_svg(&render::postprocess(&drawing).unwrap(), &Default::default()).unwrap();
//! assert!(svg.contains("<circle"));
//! ```

pub mod bitmatrix;
pub mod engine;
pub mod graph;
pub mod ingest;
pub mod oct;
pub mod order;
pub mod orientation;
pub mod par;
pub mod render;
pub mod tig;

pub use engine::{compute_coordinates, two_dimension_extension, ExtensionTrace, GridDrawing};
pub use order::{OrderRelation, PairSet};
pub use par::Parallelism;
