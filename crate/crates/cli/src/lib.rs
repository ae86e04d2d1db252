//! Command-line driver for the `lamina` toolkit and its SVG renderer.

mod commands;
pub mod render;

pub use commands::run_cli;
