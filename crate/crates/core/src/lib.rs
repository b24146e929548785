//! Explicit irreducible polynomials of prescribed degree over finite fields.

pub mod arith;
pub mod classic;
pub mod descent;
pub mod driver;
pub mod ec;
pub mod encoding;
pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod stats;
pub mod tower;

pub use error::{Error, Result};
