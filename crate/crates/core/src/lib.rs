//! Sorting by k-Pareto optimality.
//!
//! For a preference relation `R` over a weighted set of items, the k-Pareto
//! optimality `po(x)` of an item is the measure of the items strictly
//! preferable to it. Sorting by `po` yields the sets
//! `T_k = {x : po(x) <= k}`, which are the largest selections offering the
//! maximum number of incomparable (choice-offering) pairs for their measure.
//!
//! The crate provides
//!
//! * [`relations`]: declarative preference relations and their text form;
//! * [`measures`]: discrete measures and empirical distribution functions;
//! * [`posort`]: exact and probabilistic `po`, `T_k`, choice, diversity,
//!   Pareto fronts, the exhaustive maximum-choice oracle and closed forms for
//!   continuous coordinates;
//! * [`metrics`]: hypervolume, dominated fraction, Kendall's tau and the
//!   "wealthy group" partition;
//! * [`evolve`]: a multi-objective 0/1 knapsack benchmark with NSGA-II and
//!   po-based environmental selection, and a self-adaptive differential
//!   evolution solver for constrained problems.
//!
//! Inner loops run on rayon when the default `parallel` feature is enabled;
//! results are identical with and without it.

pub mod error;
pub mod evolve;
pub mod matrix;
pub mod measures;
pub mod metrics;
pub mod par;
pub mod posort;
pub mod relations;
pub mod rng;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use measures::{DiscreteMeasure, Ecdf, HStar};
pub use posort::{PoRanking, PointSet};
pub use relations::{cmop_relation, ComparisonOutcome, Orientation, RelationSpec};
