//! Greedy constructors and exact verifiers for chains of witnesses in
//! families of large sets: finite sums, arithmetic progressions, matrix
//! images, variable words, plus small exhaustive Ramsey certificates.
//!
//! Infinite objects are modelled on a finite ground window `[1..n_max]` and
//! "largeness" is supplied by a pluggable oracle ([`DyadicOracle`] for
//! numbers, [`chains::WordOracle`] for words).

pub mod antiap;
pub mod chains;
pub mod classical;
pub mod cli;
pub mod error;
pub mod fg;
pub mod foundation;
pub mod rado;
pub mod report;
pub mod sumsets;
pub mod words;

pub use chains::{build_chain, verify_chain, BuildOptions, ChainFamily, StructureKind, Witness, WitnessChain};
pub use error::{Error, Result};
pub use foundation::{Coloring, GroundWindow, Membership, Rational, SubsetMask, WindowSet};
pub use report::VerificationReport;
pub use sumsets::{DyadicOracle, FiniteSeq, Star};
