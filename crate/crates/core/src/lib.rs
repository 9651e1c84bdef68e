//! Categories of relations over finite regular categories.
//!
//! The crate models `Rel(C)` for four concrete finite backends (sets,
//! groups, vector spaces over a prime field, quasigroups) and builds the
//! categorical quantum-mechanics toolkit on top of it: special dagger
//! Frobenius structures and their correspondence with internal groupoids,
//! the CP construction with Choi positivity, Mal'cev/difunctionality
//! analysis, quantum-property checkers, and a symmetric-encryption
//! verifier. Everything is finite and exhaustively checkable; there is no
//! sampling and no tolerance anywhere.

pub mod backend;
pub mod cp;
pub mod crypto;
pub mod descriptor;
pub mod diagram;
pub mod error;
pub mod frobenius;
pub mod groupoid;
pub mod quantum;
pub mod rel;
pub mod suites;

pub use error::{Error, Result};
