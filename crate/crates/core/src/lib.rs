//! A workbench for the finite symmetric integral relation algebras `L(p,n)`.
//!
//! The crate builds the algebras and their fused subalgebras, constructs
//! (weak) representations over finite bases and verifies them with boolean
//! matrix arithmetic, runs the seeded random construction that splits cross
//! edges into `n` classes together with its specialised witness checker,
//! evaluates the probability bounds behind it, and drives the
//! subalgebra-embedding and equational-complexity computations.
//!
//! Start with [`lpn::build_lpn`] and [`repr::build_affine`]; the `examples/`
//! directory has one runnable program per capability.

pub mod algebra;
pub mod cli;
pub mod complexity;
pub mod error;
pub mod gf;
pub mod io;
pub mod lpn;
pub mod repr;
pub mod term;
pub mod xi;

pub use error::{Error, Result};
