//! Numerical workbench for isometric and unitary dilations of contraction
//! matrices and matrix semigroups.
//!
//! The crate constructs finite-depth truncations of the classical dilation
//! objects and verifies their defining identities with quantified residuals:
//!
//! - [`mat`] — dense complex linear algebra primitives (PSD tests, defect
//!   operators, numerical kernels, unitary extension of partial isometries);
//! - [`index`] — exact rational arithmetic for multi-parameter index
//!   semigroups and their commensurability reduction to integer lattices;
//! - [`cogen`] — Cayley transforms between semigroup generators and
//!   cogenerators, with the associated functional calculus;
//! - [`ando`] — truncated Schaffer and Ando-type isometric dilations of
//!   commuting contraction pairs, fixed-vector removal, and the continuous
//!   two-parameter pipeline;
//! - [`regular`] — the Brehmer positivity condition, operator-valued
//!   positive-definite kernels, truncated Naimark dilations over a lattice
//!   box, and the coisometric wrapper.
//!
//! All operations are pure functions of immutable inputs; values are safe to
//! share and transfer across threads.

pub mod ando;
pub mod cogen;
pub mod error;
pub mod index;
pub mod mat;
pub mod regular;
pub mod report;

pub use error::{DilationError, Result};
