//! File formats, table drivers, thread-parallel brute force and verification
//! suites on top of `extremal-core`. The `extremal` binary is a thin clap
//! front end over this library.

pub mod brute;
pub mod config;
pub mod error;
pub mod matrix_io;
pub mod render;
pub mod svg;
pub mod tables;
pub mod verify;

pub use config::{OutputFormat, RunConfig};
pub use error::CliError;
pub use render::Table;
