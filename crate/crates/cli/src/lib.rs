//! Configuration, orchestration and table output for the `persnorm` binary.

pub mod checks;
pub mod config;
pub mod emit;
pub mod pipeline;

pub use config::PipelineConfig;
pub use emit::{emit_table, Cell, Format, OutputDir, Table};
pub use pipeline::{run_pipeline, Command, ErrorKind, Manifest, PipelineError, Stage};
