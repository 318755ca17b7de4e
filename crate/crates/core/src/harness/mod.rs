//! Experiment grids, per-cell statistics and their CSV / SVG output.

pub mod config;
pub mod csv_io;
pub mod grid;
pub mod stats;
pub mod svg;

pub use config::{load_grid_config, parse_grid_config, preset};
pub use csv_io::{read_summary_csv, write_raw_csv, write_summary_csv};
pub use grid::{run_experiment, run_experiment_with, CellKey, ExperimentGrid, RunRow};
pub use stats::{summarize, CellStats};
pub use svg::{emit_svg_plot, XAxis};
