//! Exact computations for closed tensor dg-category models of rational
//! homotopy types with finite fundamental group.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactla`] sparse exact linear algebra over ℚ and cochain complexes,
//! * [`nabla`] polynomial differential forms on standard simplices,
//! * [`simpset`] finite simplicial sets, edge-path groups, coset enumeration
//!   and finite universal covers,
//! * [`group`] and [`repcat`] finite groups and their rational
//!   representations, with Tannaka reconstruction,
//! * [`derham`] local systems and the twisted polynomial de Rham complex,
//! * [`eqcdga`] presented equivariant cdgas, their hom complexes and the
//!   comparison checks against the de Rham side,
//! * [`wordcat`] closed-tensor words and free dg-categories on graphs,
//! * [`fixtures`] named spaces, groups, representations and cdgas.

pub mod derham;
pub mod eqcdga;
pub mod exactla;
pub mod fixtures;
pub mod group;
pub mod koszul;
pub mod nabla;
pub mod repcat;
pub mod simpset;
pub mod wordcat;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a cochain complex: d∘d ≠ 0 starting in degree {0}")]
    NotAComplex(i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub use exactla::{CochainComplex, Matrix, Rational, SparseMatrix};
pub use group::FiniteGroup;
pub use nabla::PolyForm;
pub use repcat::Representation;
pub use simpset::FinSimplicialSet;
