//! Classification of compact-operator eigenvalue asymptotics with respect to
//! singular traces.
//!
//! The crate works with the eigenvalue function `μ` of an operator (the
//! non-increasing rearrangement of its spectrum) and its logarithmic coordinate
//! `g(t) = -ln μ(e^t)`. On top of those it provides:
//!
//! - [`integral`]: the integral eigenvalue function `S`, trace-class detection
//!   and the ratios used by the traceability criteria;
//! - [`indices`]: Matuszewska indices, regularity and linear-bound witnesses;
//! - [`classify`]: the three equivalent singular-traceability criteria and the
//!   zero/infinite dichotomy relative to a regular reference operator;
//! - [`ideals`]: membership in principal ideals and their kernels;
//! - [`construct`]: staircase constructions of singularly traceable operators
//!   that dominate or annihilate a given one;
//! - [`cli`]: the `singtrace` command-line front end.

pub mod classify;
pub mod cli;
pub mod construct;
pub mod error;
pub mod function;
pub mod grid;
pub mod ideals;
pub mod indices;
pub mod integral;
pub mod quad;
pub(crate) mod serde_ext;

pub use error::{Error, Result};
pub use function::{EigenvalueFunction, GFunction, Profile};
