//! Command-line driver for `helmddm-core`: TOML experiment files, the
//! `helmddm` binary and file exporters (VTK, CSV, Matrix Market).

pub mod cli;
pub mod config;
pub mod export;
pub mod probe;
