//! Exact calculus for negative-definite plumbing trees.
//!
//! The crate decides rationality of a plumbing graph (Laufer's computation
//! sequence, cross-checked with Artin's `χ(Z_min) ≥ 1`) and reports the
//! equivalent topological properties of the link: L-space, left-orderable
//! fundamental group, coorientable taut foliation. It also builds and checks
//! decomposition certificates that cut a non-rational graph along JSJ tori
//! into pieces filled with slopes.
//!
//! Modules, bottom-up:
//! - [`graph`]: the decorated-tree data model, file format and moves;
//! - [`lattice`]: intersection form, determinants, definiteness, `K`, `χ`;
//! - [`laufer`]: `Z_min`, rationality, bad vertex sets;
//! - [`surgery`]: continued fractions, cut-and-fill, certificates;
//! - [`seifert`]: star-shaped graphs and Seifert invariants;
//! - [`classify`] and [`census`]: reports and exhaustive enumeration.

pub mod census;
pub mod classify;
pub mod exact;
pub mod fixtures;
pub mod graph;
pub mod lattice;
pub mod laufer;
pub mod seifert;
pub mod surgery;

pub use graph::{PlumbingGraph, VertexId};
pub use lattice::{Cycle, Definiteness};
