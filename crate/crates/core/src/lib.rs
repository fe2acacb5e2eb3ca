//! Exact integer verification of the finite combinatorics attached to
//! Artin-Mumford double solids: line and conic-bundle classification on the
//! degree-2 del Pezzo surface, an exhaustive sign-assignment scan, curve-class
//! arithmetic on the blown-up double solid with its GF(2) torsion bookkeeping,
//! and Riemann-Roch decomposition analysis on the Enriques lattice.
//!
//! All arithmetic is checked 64-bit; overflow is reported as an error, never
//! wrapped.

pub mod amcycles;
pub mod canonical;
pub mod dp2;
pub mod enriques;
pub mod gf2;
pub mod lattice;
pub mod signlemma;

pub use lattice::{BilinearLattice, ClassVector, DivisorCurvePairing, TripleRuleTable};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("lattice mismatch: expected `{expected}`, got `{got}`")]
    LatticeMismatch { expected: String, got: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid lattice `{name}`: {reason}")]
    InvalidLattice { name: String, reason: String },
    #[error("class is not a line: {0}")]
    NotALine(String),
    #[error("class is not a conic-bundle fiber class: {0}")]
    NotAConicBundle(String),
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
    #[error("unknown class label `{0}`")]
    UnknownLabel(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),
    #[error("self-intersection must be even, got {0}")]
    OddSelfIntersection(i64),
    #[error("equation references undeclared unknown `{0}`")]
    UndeclaredUnknown(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
