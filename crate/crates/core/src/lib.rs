//! Finite spans, truncated simplicial sets and the 2-Segal, paracyclic and
//! Γ-set structures built from them.

pub mod acceptance;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod examples;
pub mod finspan;
pub mod gammaset;
pub mod oracle;
pub mod paracyclic;
pub mod perm;
pub mod pseudomonoid;
pub mod report;
pub mod simplicial;

pub use error::{Error, Result};
