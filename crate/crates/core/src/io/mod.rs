//! File formats, run configuration and the batch runner.

pub mod config;
pub mod csv;
pub mod run;

pub use self::config::{load_config, Format, PipelineConfig};
pub use self::csv::{read_station_csv, read_table_csv, write_table_csv, Schema};
pub use self::run::{run, Manifest, RunReport};
