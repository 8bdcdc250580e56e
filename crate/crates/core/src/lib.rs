//! Exact symbolic computations in the homology of the filtered operad of
//! non-k-overlapping discs.

pub mod algebra;
pub mod basis;
pub mod cli;
pub mod error;
pub mod expr;
pub mod forests;
pub mod operad;
pub mod rewrite;
pub mod verify;

pub use algebra::{Element, Monomial};
pub use error::{Error, Result};
pub use expr::{AmbientContext, Expr};
