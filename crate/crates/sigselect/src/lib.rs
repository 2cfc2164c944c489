//! File formats, result caching, reporting and the command-line tool built
//! on `sigselect-core`.

pub mod cache;
pub mod cli;
pub mod config;
pub mod error;
pub mod model;
pub mod report;
pub mod sgvf;
pub mod textio;

pub use error::{Error, Result};
