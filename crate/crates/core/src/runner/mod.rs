//! Scenario configuration, named presets, execution and CSV/JSON output.
//!
//! A scenario is a JSON document. Physics keys sit at the top level (`J`,
//! `N`, `theta`, then either the bare couplings `g0`, `gN`, `eta`,
//! `delta_f`, ... or the effective ones `g`/`g0_prime`, `gN`,
//! `delta0_prime`, ...); run settings live in the `grid`, `packet`,
//! `catch`, `schedule`, `integrator`, `sweep` and `output` sections.

mod config;
mod manifest;
mod presets;
mod run;
mod table;

pub use config::{
    parse_config, resolve_config, OutputFormat, ParsedConfig, Physics, RawCatch, RawConfig, RawGrid, RawIntegrator,
    RawOutput, RawPacket, RawSweep, ScenarioConfig, SweepMode, SweepSpec, Task, DEFAULT_CATCH_SITES,
    DEFAULT_CATCH_T_END, DEFAULT_COUPLING, DEFAULT_DT, DEFAULT_RELEASE_TIME, DEFAULT_SITES, DEFAULT_SNAPSHOT_STRIDE,
    DEFAULT_SWEEP_POINTS,
};
pub use manifest::{
    config_from_manifest, parse_config_or_manifest, parse_manifest, raw_config_from_text, RunManifest, TOOL_NAME,
    TOOL_VERSION,
};
pub use presets::{
    catch_scenario, equal_coupling_scenario, reference_scenario, run_preset, theta_grid, PresetOptions,
    APPC_HEATMAP_EVERY, APPC_HEATMAP_SITES, FIG2B_COUPLINGS, FIG4A_SEPARATIONS, FIG4B_POINTS, PRESETS, THETA_POINTS,
};
pub use run::{
    catch_series_table, heatmap_table, run_evolution, run_point, run_points, run_scenario, series_table,
    write_error_record, write_outputs, PointResult, RunOutcome, ROUTING_COLUMNS,
};
pub use table::{read_csv_table, Cell, Table};
