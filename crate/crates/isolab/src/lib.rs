//! Commuting involutions of classical Lie algebras in exact arithmetic:
//! graded decompositions, Cartan subspaces, contractions of the bracket,
//! degenerated isotropy actions, and invariant evaluation.

pub mod error;
pub mod invariants;
pub mod cartan;
pub mod contraction;
pub mod invol;
pub mod sample;
pub mod scenario;
pub mod lie;

pub use error::IsolabError;
