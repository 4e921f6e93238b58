//! IO, file formats, parallel runners, and the CLI for `popgcn-core`.

pub mod checkpoint;
pub mod cli;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod report;
pub mod runner;

pub use error::{Error, Result};
