//! Finite models of 2-groups, principal bisets and central extensions.
//!
//! Groupoids are finite with dense integer ids, abelian coefficient groups
//! are written additively, and composition is diagrammatic throughout.

pub mod bibundle;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod groupoid;
pub mod random;
pub mod report;
pub mod twogroup;

pub use error::{Error, Result};
pub use report::{Report, Violation};
