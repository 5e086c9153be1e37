//! Ordered read-`k`-times branching programs (`k`-OBDDs) in deterministic,
//! nondeterministic, probabilistic and quantum semantics.
//!
//! The crate provides the program representation and its file format,
//! evaluators for all four semantics, the shuffled address function `SAF`
//! and the matrix XOR pointer jumping function `MXPJ`, programs computing
//! them, and exact subfunction counting together with the bounds that
//! separate the program classes.

pub mod analysis;
pub mod cli;
pub mod constructions;
pub mod format;
pub mod functions;
pub mod program;
pub mod random;
pub mod semantics;

pub use program::{Assignment, Level, Program, Semantics, Transition, VariableOrder};
