//! Combinatorial free-group computation.
//!
//! The crate is organised around reduced words over a rank-`k` alphabet:
//!
//! - [`freewords`]: reduction, cyclic words, frequency profiles and subword predicates.
//! - [`stallings`]: folded subgroup graphs, membership, rank, fiber products,
//!   malnormality, index and the central-tree decomposition.
//! - [`whitehead`]: Whitehead and relabeling automorphisms, peak-reduction
//!   minimization and strict Whitehead minimality.
//! - [`sampling`]: reproducible random walks, sphere and ball samplers.
//! - [`certifier`]: the Aut-malnormality certification pipeline.
//! - [`sharpness`]: the towers of subgroups realising the sharp splitting bound.
//! - [`expcli`]: Monte-Carlo experiments and the command-line front end.

pub mod certifier;
pub mod error;
pub mod expcli;
pub mod freewords;
pub mod sampling;
pub mod sharpness;
pub mod stallings;
pub mod whitehead;

pub use error::{Error, Result};
pub use freewords::{Alphabet, CyclicWord, Letter, ReducedWord};
pub use stallings::StallingsGraph;
