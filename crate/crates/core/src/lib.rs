//! Seeded randomness extractors and condensers over GF(2^w), with an exact
//! finite-distribution oracle for checking them.

pub mod bits;
pub mod cli;
pub mod codes;
pub mod compose;
pub mod condenser;
pub mod designs;
pub mod error;
pub mod extractor;
pub mod field;
pub mod hashing;
pub mod oracle;
pub mod poly;
pub mod trevisan;

pub use bits::BitString;
pub use error::{Error, Result};
