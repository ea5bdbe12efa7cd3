//! Command-line front end for `maxent-core`: gate and certificate files plus
//! the `check`, `design`, `scan-hamiltonian` and `verify` subcommands.

pub mod commands;
pub mod format;

pub use commands::{run, Cli};
