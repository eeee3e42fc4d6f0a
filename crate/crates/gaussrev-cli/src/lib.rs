//! Library side of the experiment runner: config-file and grid-spec
//! parsing, the pure experiment drivers, and output writers. The binary in
//! `main.rs` is a thin layer over these, and the fuzz targets exercise the
//! parsers directly.

pub mod config;
pub mod gridspec;
pub mod output;
pub mod runners;

pub use config::{parse_config, ConfigError, ConfigFile};
pub use gridspec::{parse_class, parse_grid, SpecError};
