//! Command line front end around the `bjontegaard` crate: CSV measurement
//! tables in, JSON reports and SVG plots out. The `bdtool` binary is a thin
//! wrapper over [`app::run`]; everything else lives here so tests can drive
//! the full pipeline in process.

pub mod app;
pub mod report;
pub mod svg;
pub mod table;

pub use report::{
    render_json, render_text, run_report, run_rie, run_validate, shared_param_sweep, ConfigError,
    Report, ReportConfig, ReportOutcome,
};
pub use table::{MetricInfo, RunRow, RunTable, TableError};
