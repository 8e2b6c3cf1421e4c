//! Constrained synchronization of deterministic semi-automata under
//! commutative regular constraints.
//!
//! A constraint language is split into a union of shuffle products of unary
//! languages, summarized by vectors over `ℕ₀ ∪ {∞}`, and classified as
//! polynomial, NP-complete or PSPACE-complete. Solvers decide concrete
//! instances; [`gadgets`] builds the hardness reductions.

pub mod automata;
pub mod commutative;
pub mod unary;
pub mod vectors;
pub mod solvers;
pub mod gadgets;
pub mod random;
