//! Decidable typechecking for D<:.
//!
//! The algorithmic relations (exposure, promotion and demotion, step typing
//! and step subtyping) live in [`exposure`], [`shift`] and [`step`]. The
//! [`declarative`] module holds the standard rules as a derivation checker,
//! together with an elaborator from step traces. [`lab`] encodes the
//! bad-bounds counterexample environment and its lemma harnesses, and
//! [`dotty`] models a bounds-aware non-transitive subtype checker.

pub mod declarative;
pub mod dotty;
pub mod env;
pub mod exposure;
pub mod lab;
pub mod shift;
pub mod step;
pub mod syntax;
pub mod trace;

pub use env::{EnvError, TypeEnv};
pub use syntax::{Term, Type, TypeLabel, VarName};
