//! Executable operads.
//!
//! Terms over a signature, the free plain, symmetric and finite-product operads
//! on it, builtin target operads, the clone bridge, a decision procedure for the
//! 2-cells of the weakening of a presented operad, and strictification of finite
//! weak P-categories.

pub mod cli;
pub mod clones;
pub mod error;
pub mod finmaps;
pub mod operads;
pub mod report;
pub mod strictify;
pub mod terms;
pub mod trees;
pub mod weakcat;
pub mod weakening;

pub use error::{Error, Result};
pub use report::{Check, Report};
