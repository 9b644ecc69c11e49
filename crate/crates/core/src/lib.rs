//! Exact symbolic engine for meromorphic functionals on the projective line,
//! semigeometric vertex operators, and their Fock-space localization.

pub mod arith;
pub mod bf;
pub mod checker;
pub mod error;
pub mod fock;
pub mod mm;
pub mod ops;
pub mod p1;
pub mod par;
pub mod parse;

pub use error::{Error, Result};
