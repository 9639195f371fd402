//! Exact character theory of `GL(n, q)` at desk scale and the
//! intersection-bound machinery built on it.

pub mod cyclotomic;
pub mod ekr;
pub mod bruteforce;
pub mod chartab;
pub mod error;
pub mod gfq;
pub mod glq;
pub mod linalg;
pub mod partitions;
pub mod scheme;

pub use error::{Error, Result};
