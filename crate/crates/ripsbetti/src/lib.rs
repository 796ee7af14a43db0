//! Vietoris-Rips and quasi-Rips complexes from Euclidean point clouds,
//! reduced Betti numbers over prime fields, normalized H1 cycle bases, the
//! extremal point configurations that realize large Betti numbers, and
//! checkers for the structural lemmas behind them.
//!
//! The `examples/` directory has one runnable program per capability; the
//! `ripsbetti` binary wraps the same entry points as subcommands.

// Guards like `!(x > 0.0)` are deliberate: they reject NaN where `x <= 0.0`
// would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Dimension-indexed loops over parallel face/level tables read better with
// the explicit index.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod cli;
pub mod complexes;
pub mod constructions;
pub mod cycles;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod homology;

pub use complexes::{build_quasi_rips, build_rips, flag_skeleton, join, link_of, Complex};
pub use error::{Error, Result};
pub use geometry::{PointCloud, ThresholdPolicy};
pub use homology::{betti_numbers, BettiVector, FieldSpec};
