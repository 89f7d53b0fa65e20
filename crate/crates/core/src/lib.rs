//! Exact algebraic duals over graded spaces.
//!
//! The crate works with vector spaces of finitely supported functions
//! ([`finsupp`]), decides freeness and builds bases and complements
//! ([`basis`]), represents functionals on polynomial spaces as truncated
//! moment tables ([`duals`]), solves dual equations `Λ ∘ O = T` for
//! column-finite operators ([`operators`]), and treats linear differential
//! operators with polynomial coefficients symbolically ([`diffops`]).
//! [`cardinals`] does the GCH bookkeeping for dimensions of the
//! infinite-dimensional spaces that the finite computations model.
//!
//! ```
//! use hamel::diffops::{fundamental_solution, DiffOp};
//!
//! let p = DiffOp::parse("d1 + 1").unwrap();
//! let f = fundamental_solution(&p, 5).unwrap();
//! let moments: Vec<String> = f.sequence().unwrap().iter().map(|m| m.to_string()).collect();
//! assert_eq!(moments, ["1", "1", "2", "6", "24", "120"]);
//! ```

pub mod basis;
pub mod cardinals;
pub mod cli;
pub mod diffops;
pub mod duals;
pub mod error;
pub mod finsupp;
mod json;
pub(crate) mod linalg;
pub mod operators;
pub mod poly;

pub use error::{Error, Result};
pub use finsupp::{Field, FinSuppVec, Index, Scalar};
pub use poly::Polynomial;
