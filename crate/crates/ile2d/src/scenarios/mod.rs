//! Benchmark scenario definitions, configuration parsing, the run harness,
//! convergence and penalty-sensitivity studies, and output writers.

mod analysis;
mod config;
mod outputs;
mod presets;
mod run;
mod studies;

pub use analysis::{
    dominant_frequency, figure_eight_crossing_x, max_abs, rotation_cycle_averages, series,
    upward_crossings, window,
};
pub use config::{load_config, parse_config, BodyConfig, ScenarioConfig, Shape};
pub use outputs::{csv_row, parse_csv, write_csv, write_vtk_fields, write_vtk_interface, TimeSeriesRecord, CSV_HEADER};
pub use presets::{preset, Profile, PRESET_NAMES};
pub use run::{build_body_mesh, build_simulation, resolve_out_dir, run, RunOutput};
pub use studies::{bisect_kappa, convergence_study, kappa_sensitivity, ConvergenceReport, KappaRow};
