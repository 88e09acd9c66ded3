//! Fuzzy simulations and bisimulations between fuzzy automata over complete
//! residuated lattices on the rational unit interval.
//!
//! The crate computes recognized fuzzy languages, checks and computes the
//! greatest fuzzy simulation or bisimulation between two automata together
//! with its norm, handles the λ-approximate variants over the Gödel
//! structure, and evaluates Hennessy-Milner formulas characterizing the
//! greatest relations.

pub mod automata;
pub mod cli;
pub mod error;
pub mod fuzzyrel;
pub mod hmlogic;
pub mod lattice;
pub mod oracle;
pub mod simrel;

pub use automata::{FuzzyAutomaton, Word};
pub use error::{Error, Result};
pub use fuzzyrel::{FuzzyRelation, FuzzySet};
pub use hmlogic::{Formula, Fragment};
pub use lattice::{Degree, LatticeKind, ResiduatedLattice};
pub use simrel::{RelationKind, SimReport};
