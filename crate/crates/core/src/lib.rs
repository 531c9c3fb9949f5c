//! Exact primitive cohomology of pointed coalgebras.

pub mod coalgebra;
pub mod cobar;
pub mod families;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod ring;

pub use field::{FieldContext, Scalar};
