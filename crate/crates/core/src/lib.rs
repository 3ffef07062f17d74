//! Identifier semantics, category classification and entity linking for
//! mathematical documents.

pub mod augment;
pub mod classify;
pub mod corpus;
pub mod encode;
pub mod error;
pub mod exec;
pub mod explain;
pub mod linker;
pub mod stats;

pub use error::{Error, Result};
pub use exec::Execution;
