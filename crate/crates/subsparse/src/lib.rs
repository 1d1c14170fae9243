//! File formats, corpus loading, the benchmark harness, the property suite and
//! the `subsparse` command line, on top of [`subsparse_core`].

pub mod audit;
pub mod bench;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod io;
pub mod validate;

pub use error::{Error, Result};
