//! Dataset IO, report files and the `lmp` command-line tool built on `lmp-core`.

pub mod cli;
pub mod data_io;
mod error;
pub mod report;
pub mod run;

pub use error::{Error, Result};
