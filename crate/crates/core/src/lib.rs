//! Exact analysis of how much individual players, and small coalitions of
//! players, can move the expectation of a function of their jointly
//! distributed inputs.
//!
//! Everything is computed with exact rational arithmetic over finite
//! distributions: explicit supports or product (fully independent) laws
//! that are streamed without being materialized. On top of the core
//! quantities (effect, influence, pivotality) the crate provides the
//! Hadamard pairwise-independent sample space and its relatives, the
//! monotone counterexample constructions built from it, a Fourier engine
//! for minimal-support pairwise-independent spaces, and verifiers for the
//! bounds on the number of pivotal players and sets.

pub mod analysis;
pub mod boolfn;
pub mod dist;
mod error;
pub mod generators;
pub mod json;
pub mod rational;
pub mod report;
pub mod theorems;

pub use boolfn::{Builtin, DenseTable, PartialTable, PlayerFunction, UpwardClosure};
pub use dist::{Alphabet, Distribution, ExplicitDist, Outcome, ProductDist};
pub use error::{Error, Result};
pub use rational::Rational;
