//! Command-line pipeline around `episense-core`: file formats, run manifests,
//! charts and the `episense` subcommands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod dot;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod svg;

pub use cli::run;
