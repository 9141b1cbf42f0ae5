//! The n-dimensional propositional calculus.
//!
//! Formulas are built from decorated variables `X^π`, constants `e_k` and the
//! (n+1)-ary generalised if-then-else `q`. Each dimension `i` has its own
//! turnstile `⊢_i`. The crate provides the syntax, the n-valued semantics, a
//! proof kernel for the sequent rules, a complete cut-free prover, the
//! translations to and from classical logic, and finite n-dimensional Boolean
//! algebras with their multideals.

// Errors carry the offending sequent or node by value so callers can print
// them without re-walking the proof; they are only built on the failure path.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod algebra;
pub mod classical;
pub mod harness;
pub mod kernel;
pub mod prover;
pub mod semantics;
pub mod syntax;

pub use syntax::{Context, Dimension, Formula, Permutation, Sequent, SyntaxError};
