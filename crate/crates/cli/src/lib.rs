//! Command-line front end for `tsecon`: CSV ingestion, a declarative
//! pipeline, text/JSON/SVG reports and the bundled demo dataset.

pub mod config;
pub mod csvio;
pub mod demo;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod svg;

pub use config::PipelineConfig;
pub use error::{CliError, Result};
pub use pipeline::{run_pipeline, ReportBundle};
pub use report::emit_report;
