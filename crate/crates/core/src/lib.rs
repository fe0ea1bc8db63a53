//! Finite-dimensional models of Toeplitz-type spectral triples and their
//! quantum metric geometry.
//!
//! A [`TruncatedTriple`] fixes a Hilbert space basis of Dirac eigenvectors
//! and a projection `P`. Elements of the extension are pairs of a symbol and a
//! compact ([`ExtElement`]); the two-parameter family of Dirac operators
//! `D_{α,β}` acts on `PH ⊕ PH ⊕ QH`. The crate evaluates the resulting
//! Lipschitz seminorms exactly, computes Connes distances between states with
//! a certified ascent solver, and checks the comparison bounds between the
//! members of the family.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod random;
pub mod report;
pub mod states;
pub mod triple;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use report::{BoundReport, Extended, Tolerances};
pub use states::{
    connes_distance, diameter_estimate, maximize_linear, BaseFunctional, DistanceResult, ElementBasis, Pencil,
    SeminormKind, SeminormSpec, SolverOptions, SplitState,
};
pub use triple::{ExtElement, ParamViolation, Params, TruncatedTriple};
