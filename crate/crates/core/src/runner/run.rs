use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use super::config::{OutputFormat, ScenarioConfig, SweepMode, Task};
use super::manifest::{RunManifest, TOOL_NAME, TOOL_VERSION};
use super::table::{Cell, Table};
use crate::dynamics::{
    catch_initial_state, evolve, gaussian_packet, routing_coefficients, window_weight, EvolveOptions, RoutingResult,
    Trajectory,
};
use crate::model::{build_generator, Lattice, ModelKind};
use crate::scattering::{closed_form_amplitudes, sweep};
use crate::Error;

/// Tables produced by one run plus its manifest.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub tables: Vec<Table>,
}

impl RunOutcome {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

/// Evolves the scenario's initial state (Gaussian packet, or the catch state
/// for `catch_release`) to `t_end`.
pub fn run_evolution(cfg: &ScenarioConfig) -> Result<Trajectory, Error> {
    let gen = build_generator(&cfg.physics.generator_params(), &cfg.grid)?;
    let kind = cfg.physics.kind();
    let state = match cfg.task {
        Task::CatchRelease => catch_initial_state(&cfg.grid, kind, cfg.physics.n_sep(), &cfg.catch)?,
        _ => gaussian_packet(&cfg.grid, kind, &cfg.packet)?,
    };
    let opts = EvolveOptions {
        t_end: cfg.t_end,
        dt: cfg.dt,
        snapshot_stride: cfg.snapshot_stride,
        keep_amplitudes: cfg.keep_amplitudes,
        schedule: Some(cfg.phase_schedule()),
    };
    Ok(evolve(&gen, &state, &opts)?)
}

/// Final routing of one wave-packet run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub routing: RoutingResult,
    pub peak_p_e: f64,
    pub norm_drift: f64,
}

pub fn run_point(cfg: &ScenarioConfig) -> Result<PointResult, Error> {
    let traj = run_evolution(cfg)?;
    Ok(PointResult {
        routing: routing_coefficients(&traj.final_state, &cfg.grid, cfg.physics.n_sep()),
        peak_p_e: traj.peak_p_e,
        norm_drift: traj.norm_drift,
    })
}

/// Independent runs on the rayon pool, results in input order.
pub fn run_points(cfgs: &[ScenarioConfig]) -> Vec<Result<PointResult, Error>> {
    cfgs.par_iter().map(run_point).collect()
}

pub fn heatmap_table(name: &str, cfg: &ScenarioConfig, traj: &Trajectory) -> Table {
    let mut t = Table::new(name, &["t", "m", "lattice", "probability"]);
    for s in &traj.snapshots {
        for (lattice, probs) in [(Lattice::A, &s.prob_a), (Lattice::B, &s.prob_b)] {
            for (i, p) in probs.iter().enumerate() {
                t.push(vec![s.t.into(), cfg.grid.site_label(i).into(), lattice.label().into(), (*p).into()]);
            }
        }
    }
    t
}

pub fn series_table(traj: &Trajectory, kind: ModelKind) -> Table {
    let full = kind == ModelKind::Full;
    let columns: &[&str] = if full {
        &["t", "theta", "P_a", "P_b", "P_e", "P_f", "norm"]
    } else {
        &["t", "theta", "P_a", "P_b", "P_e", "norm"]
    };
    let mut t = Table::new("series", columns);
    for s in &traj.snapshots {
        let mut row: Vec<Cell> = vec![
            s.t.into(),
            s.theta.into(),
            s.prob_a.iter().sum::<f64>().into(),
            s.prob_b.iter().sum::<f64>().into(),
            s.p_e.into(),
        ];
        if full {
            row.push(s.p_f.unwrap_or(0.0).into());
        }
        row.push(s.norm.into());
        t.push(row);
    }
    t
}

pub fn catch_series_table(cfg: &ScenarioConfig, traj: &Trajectory) -> Table {
    let n = cfg.physics.n_sep();
    let mut t = Table::new("catch_series", &["t", "theta", "P_C_a", "P_C_b", "P_C_total"]);
    for s in &traj.snapshots {
        let a = window_weight(&s.prob_a, &cfg.grid, n);
        let b = window_weight(&s.prob_b, &cfg.grid, n);
        t.push(vec![s.t.into(), s.theta.into(), a.into(), b.into(), (a + b).into()]);
    }
    t
}

pub const ROUTING_COLUMNS: [&str; 10] =
    ["T_a", "T_b", "R_a", "R_b", "mid_a", "mid_b", "atom_residual", "t_final", "max_P_e", "norm_drift"];

fn routing_cells(p: &PointResult) -> Vec<Cell> {
    let r = &p.routing;
    [r.t_a, r.t_b, r.r_a, r.r_b, r.mid_a, r.mid_b, r.atom_residual, r.t_final, p.peak_p_e, p.norm_drift]
        .into_iter()
        .map(Cell::from)
        .collect()
}

fn amplitude_table(cfg: &ScenarioConfig, traj: &Trajectory) -> Table {
    let mut t = Table::new("amplitudes", &["t", "component", "m", "re", "im"]);
    let n = cfg.grid.n_sites();
    for s in &traj.snapshots {
        let Some(amps) = &s.amplitudes else { continue };
        for (i, z) in amps.iter().enumerate() {
            let (component, m): (&str, Cell) = match i {
                i if i < n => ("a", cfg.grid.site_label(i).into()),
                i if i < 2 * n => ("b", cfg.grid.site_label(i - n).into()),
                i if i == 2 * n => ("e", "".into()),
                _ => ("f", "".into()),
            };
            t.push(vec![s.t.into(), component.into(), m, z.re.into(), z.im.into()]);
        }
    }
    t
}

fn dynamic_tables(cfg: &ScenarioConfig, manifest: &mut RunManifest) -> Result<Vec<Table>, Error> {
    let traj = run_evolution(cfg)?;
    manifest.norm_drift = Some(traj.norm_drift.abs());
    let n = cfg.physics.n_sep();
    let point = PointResult {
        routing: routing_coefficients(&traj.final_state, &cfg.grid, n),
        peak_p_e: traj.peak_p_e,
        norm_drift: traj.norm_drift,
    };
    let mut routing = Table::new("routing", &ROUTING_COLUMNS);
    routing.push(routing_cells(&point));
    let mut tables = vec![routing, series_table(&traj, cfg.physics.kind())];
    if cfg.task == Task::CatchRelease {
        tables.push(catch_series_table(cfg, &traj));
    }
    if cfg.heatmap {
        tables.push(heatmap_table("heatmap", cfg, &traj));
    }
    if cfg.keep_amplitudes {
        tables.push(amplitude_table(cfg, &traj));
    }
    Ok(tables)
}

fn scatter_tables(cfg: &ScenarioConfig) -> Result<Vec<Table>, Error> {
    let input = cfg.physics.scattering_input(cfg.packet.k_f)?;
    let a = closed_form_amplitudes(&input)?;
    let mut amps = Table::new("amplitudes", &["name", "re", "im", "abs2"]);
    let names = ["r_a", "l_al", "l_ar", "t_a", "r_b", "l_bl", "l_br", "t_b"];
    for (name, z) in names.iter().zip(a.to_array()) {
        amps.push(vec![(*name).into(), z.re.into(), z.im.into(), z.norm_sqr().into()]);
    }
    let c = a.coefficients();
    let mut coeffs = Table::new("coefficients", &["T_a", "T_b", "R_a", "R_b", "flux", "xi"]);
    coeffs.push(vec![c.t_a.into(), c.t_b.into(), c.r_a.into(), c.r_b.into(), c.total().into(), a.xi.into()]);
    Ok(vec![amps, coeffs])
}

fn sweep_tables(cfg: &ScenarioConfig, manifest: &mut RunManifest) -> Result<Vec<Table>, Error> {
    let spec = cfg.sweep.as_ref().ok_or_else(|| Error::config("sweep", "required for task `sweep`"))?;
    let column = spec.kind.column();
    match spec.mode {
        SweepMode::Analytic => {
            let base = cfg.physics.scattering_input(cfg.packet.k_f)?;
            let rows = sweep(spec.kind, &base, &spec.values)?;
            let mut t = Table::new("sweep", &[column, "T_a", "T_b", "R_a", "R_b", "error"]);
            for r in rows {
                t.push(vec![
                    r.value.into(),
                    r.t_a.into(),
                    r.t_b.into(),
                    r.r_a.into(),
                    r.r_b.into(),
                    r.error.unwrap_or_default().into(),
                ]);
            }
            Ok(vec![t])
        }
        SweepMode::Wavepacket => {
            let points: Vec<Result<PointResult, Error>> =
                spec.values.par_iter().map(|&v| cfg.at_sweep_value(spec.kind, v).and_then(|c| run_point(&c))).collect();
            let mut columns = vec![column];
            columns.extend(ROUTING_COLUMNS);
            columns.push("error");
            let mut t = Table::new("sweep", &columns);
            let mut drift: f64 = 0.0;
            for (v, p) in spec.values.iter().zip(points) {
                let mut row = vec![Cell::from(*v)];
                match p {
                    Ok(p) => {
                        drift = drift.max(p.norm_drift.abs());
                        row.extend(routing_cells(&p));
                        row.push("".into());
                    }
                    Err(e) => {
                        row.extend(ROUTING_COLUMNS.iter().map(|_| Cell::Num(f64::NAN)));
                        row.push(e.to_string().into());
                    }
                }
                t.push(row);
            }
            manifest.norm_drift = Some(drift);
            Ok(vec![t])
        }
    }
}

/// Executes a validated scenario. Nothing is written to disk.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutcome, Error> {
    let start = Instant::now();
    let mut manifest = RunManifest::new(cfg.task.name(), cfg.to_json());
    manifest.warnings = cfg.physics.warnings();
    let tables = match cfg.task {
        Task::Evolve | Task::CatchRelease => dynamic_tables(cfg, &mut manifest)?,
        Task::Scatter => scatter_tables(cfg)?,
        Task::Sweep => sweep_tables(cfg, &mut manifest)?,
    };
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(RunOutcome { manifest, tables })
}

/// Writes every table as `<name>.csv` or `<name>.json` into `dir`, then
/// `manifest.json`. Returns the written paths.
pub fn write_outputs(outcome: &mut RunOutcome, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>, Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let metadata = json!({ "tool": TOOL_NAME, "version": TOOL_VERSION, "task": outcome.manifest.task });
    let mut written = Vec::new();
    for table in &outcome.tables {
        let (file, text) = match format {
            OutputFormat::Csv => (format!("{}.csv", table.name), table.to_csv()),
            OutputFormat::Json => (
                format!("{}.json", table.name),
                serde_json::to_string(&table.to_json(&metadata)).map_err(|e| Error::Serialization(e.to_string()))?
                    + "\n",
            ),
        };
        let path = dir.join(&file);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        outcome.manifest.outputs.push(file);
        written.push(path);
    }
    outcome.manifest.write(dir)?;
    written.push(dir.join("manifest.json"));
    Ok(written)
}

/// Writes `error.json` with the machine-readable error record.
pub fn write_error_record(dir: &Path, err: &Error) -> Result<PathBuf, Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join("error.json");
    let text = serde_json::to_string_pretty(&err.to_record()).map_err(|e| Error::Serialization(e.to_string()))?;
    std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
