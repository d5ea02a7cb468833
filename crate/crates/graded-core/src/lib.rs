//! Exact computer algebra for strongly group-graded rings.
//!
//! The library computes with strongly graded rings through *module frame
//! systems*: finite column/row pairs `(x_g, y_g)` over the principal
//! component with `y_gᵗ x_g = 1`. From frames it extracts factor systems
//! `(n, α, ω)`, verifies their axioms, reconstructs the graded ring from
//! abstract factor-system data, lifts derivations of the principal
//! component to graded derivations (with the cohomological obstruction when
//! the naive lift fails), and computes the associated degree-one
//! connection/curvature calculus. Concrete graded rings in scope: unital
//! Leavitt path algebras with their canonical ℤ-grading (including the
//! Leavitt algebra L(1,2)) and Laurent polynomial rings.
//!
//! All arithmetic is exact (rationals or Gaussian rationals); every
//! verification is a zero-tolerance identity check on normal forms.

pub mod cohomology;
pub mod derivation;
pub mod error;
pub mod facsys;
pub mod graph;
pub mod group;
pub mod laurent;
pub mod lift;
pub mod linalg;
pub mod lpa;
pub mod matrix;
pub mod reconstruct;
pub mod report;
pub mod ring;
pub mod scalar;

pub use error::{Error, Result};
