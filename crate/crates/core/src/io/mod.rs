//! Configuration documents, report files and plot data.
//!
//! A configuration document is TOML with flat top-level keys named after
//! the fields of [`ScenarioConfig`](crate::ScenarioConfig); the initial
//! datum is an `[f0]` table with a `kind` key. Unknown keys are errors.

mod config;
mod output;
mod plot;

pub use config::{parse_config, parse_overrides, render_config, resolve_config, ConfigOverrides};
pub use output::{
    format_number, histogram_csv, records_csv, summary_csv, write_report, HISTOGRAM_HEADER, RECORDS_HEADER,
    SUMMARY_HEADER,
};
pub use plot::{histogram, kde};
