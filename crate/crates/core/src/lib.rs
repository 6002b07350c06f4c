//! Schubert polynomials, Rothe diagrams and the dual characters of flagged
//! Weyl modules, with tools for checking positivity statements about them.

pub mod diagram;
pub mod error;
pub mod incexc;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod purple;
pub mod schubert;
pub mod verify;
pub mod weyl;

pub use diagram::{rothe, Diagram, RowSet};
pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use perm::{Letter, Permutation, Word};
pub use poly::{Monomial, Polynomial};
