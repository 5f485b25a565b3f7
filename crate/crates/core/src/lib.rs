//! Exhaustive generation of matroids representable over a partial field,
//! using finite-field proxies with confined cross ratios, and the search for
//! small excluded minors of such classes.

pub mod engine;
pub mod error;
pub mod field;
pub mod linrep;
pub mod matroid;
pub mod pfield;

pub use error::{Error, Result};
pub use field::{Elem, FieldSpec};
