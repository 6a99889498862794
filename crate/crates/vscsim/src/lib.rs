//! Batch runner for vscsim experiments: JSON run configs, named presets
//! and CSV / plot-data output.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{load_config, parse_config, ConfigError, Emit, Experiment, RunConfig};
pub use output::{parse_csv, parse_plot_data, render_csv, render_plot_data, ParsedTable};
pub use presets::{preset, PRESETS};
pub use run::{execute, resolve_out_dir, run_to_dir, RunOutput};
