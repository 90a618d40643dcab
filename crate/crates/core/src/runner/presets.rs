//! Named scenarios, one per routing study: `fig2a`, `fig2b`,
//! `fig3`, `fig4a`, `fig4b` and `appC`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use serde_json::{json, Value};

use super::config::{parse_config, ScenarioConfig, DEFAULT_DT};
use super::manifest::RunManifest;
use super::run::{catch_series_table, run_evolution, run_points, PointResult, RunOutcome};
use super::table::{Cell, Table};
use crate::dynamics::routing_coefficients;
use crate::model::Lattice;
use crate::scattering::{sweep, ScatteringInput, SweepKind};
use crate::Error;

pub const PRESETS: [&str; 6] = ["fig2a", "fig2b", "fig3", "fig4a", "fig4b", "appC"];

/// Number of drive phases in the wave-packet θ grids.
pub const THETA_POINTS: usize = 41;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PresetOptions {
    /// Overrides the integrator step.
    pub dt: Option<f64>,
}

impl PresetOptions {
    fn dt(&self) -> f64 {
        self.dt.unwrap_or(DEFAULT_DT)
    }
}

/// `points` values evenly spaced over `[−π, π]`.
pub fn theta_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| -PI + 2.0 * PI * i as f64 / (points - 1) as f64).collect()
}

/// Main-text bare couplings: `g0 = 4J`, `gN = 0.7J`, `η = 17.5J`, `Δf = 100J`.
pub fn reference_scenario(n_sep: usize, theta: f64, include_delta0: bool, dt: f64) -> Result<ScenarioConfig, Error> {
    scenario(json!({
        "N": n_sep, "theta": theta, "g0": 4.0, "gN": 0.7, "eta": 17.5, "delta_f": 100.0,
        "include_delta0": include_delta0, "integrator": {"dt": dt},
    }))
}

/// Effective model with `g0' = gN = g` and no `Δ0'` terms.
pub fn equal_coupling_scenario(n_sep: usize, theta: f64, g: f64, dt: f64) -> Result<ScenarioConfig, Error> {
    scenario(json!({ "N": n_sep, "theta": theta, "g": g, "integrator": {"dt": dt} }))
}

/// Catch-and-release run for one reading of the bare couplings.
pub fn catch_scenario(g0: f64, g_n: f64, dt: f64) -> Result<ScenarioConfig, Error> {
    scenario(json!({
        "task": "catch_release", "N": 30, "theta": 0.0,
        "g0": g0, "gN": g_n, "eta": 17.5, "delta_f": 100.0,
        "integrator": {"dt": dt},
    }))
}

fn scenario(doc: Value) -> Result<ScenarioConfig, Error> {
    Ok(parse_config(&doc.to_string(), true)?.config)
}

fn point_t_b(p: &Result<PointResult, Error>) -> f64 {
    p.as_ref().map_or(f64::NAN, |p| p.routing.t_b)
}

struct Collected {
    configs: Vec<ScenarioConfig>,
    results: Vec<Result<PointResult, Error>>,
}

impl Collected {
    fn run(configs: Vec<ScenarioConfig>) -> Self {
        let results = run_points(&configs);
        Self { configs, results }
    }

    fn first_error(&self) -> Option<&Error> {
        self.results.iter().find_map(|r| r.as_ref().err())
    }

    fn drift(&self) -> f64 {
        self.results.iter().filter_map(|r| r.as_ref().ok()).map(|p| p.norm_drift.abs()).fold(0.0, f64::max)
    }
}

fn finish(name: &str, start: Instant, runs: Value, tables: Vec<Table>, drift: Option<f64>, dt: f64) -> RunOutcome {
    let mut manifest = RunManifest::new(format!("preset:{name}"), json!({ "preset": name, "dt": dt, "runs": runs }));
    manifest.norm_drift = drift;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    RunOutcome { manifest, tables }
}

fn fig2a(opts: &PresetOptions) -> Result<RunOutcome, Error> {
    let start = Instant::now();
    let thetas = theta_grid(THETA_POINTS);
    let mut configs = Vec::new();
    for n in 1..=4 {
        for include in [true, false] {
            for &theta in &thetas {
                configs.push(reference_scenario(n, theta, include, opts.dt())?);
            }
        }
    }
    let runs = Collected::run(configs);
    if let Some(e) = runs.first_error() {
        return Err(Error::config("preset.fig2a", e.to_string()));
    }
    let mut t = Table::new("fig2a", &["theta", "N", "T_b_with_delta0", "T_b_without_delta0"]);
    let per_n = 2 * thetas.len();
    for n in 0..4 {
        for (i, &theta) in thetas.iter().enumerate() {
            let with = point_t_b(&runs.results[n * per_n + i]);
            let without = point_t_b(&runs.results[n * per_n + thetas.len() + i]);
            t.push(vec![theta.into(), (n + 1).into(), with.into(), without.into()]);
        }
    }
    let examples = json!([runs.configs[0].to_json(), runs.configs[thetas.len()].to_json()]);
    Ok(finish("fig2a", start, examples, vec![t], Some(runs.drift()), opts.dt()))
}

pub const FIG2B_COUPLINGS: [f64; 3] = [0.1, 0.4, 0.7];

fn fig2b(opts: &PresetOptions) -> Result<RunOutcome, Error> {
    let start = Instant::now();
    let thetas = theta_grid(THETA_POINTS);
    let mut configs = Vec::new();
    for g in FIG2B_COUPLINGS {
        for &theta in &thetas {
            configs.push(equal_coupling_scenario(3, theta, g, opts.dt())?);
        }
    }
    let runs = Collected::run(configs);
    if let Some(e) = runs.first_error() {
        return Err(Error::config("preset.fig2b", e.to_string()));
    }
    let mut t = Table::new("fig2b", &["theta", "g", "T_a", "T_b"]);
    for (c, r) in runs.configs.iter().zip(&runs.results) {
        let p = r.as_ref().expect("checked above");
        let g = c.physics.scattering_input(FRAC_PI_2).map(|s| s.g).unwrap_or(f64::NAN);
        t.push(vec![c.physics.theta().into(), g.into(), p.routing.t_a.into(), p.routing.t_b.into()]);
    }
    let examples = json!([runs.configs[0].to_json()]);
    Ok(finish("fig2b", start, examples, vec![t], Some(runs.drift()), opts.dt()))
}

fn fig3(opts: &PresetOptions) -> Result<RunOutcome, Error> {
    let start = Instant::now();
    let mut configs = Vec::new();
    for theta in [FRAC_PI_2, -FRAC_PI_2] {
        let mut c = reference_scenario(3, theta, false, opts.dt())?;
        c.snapshot_stride = 50;
        configs.push(c);
    }
    let trajs: Vec<_> = {
        use rayon::prelude::*;
        configs.par_iter().map(run_evolution).collect::<Result<Vec<_>, _>>()?
    };
    let mut atom = Table::new("fig3_atom", &["theta", "t", "P_e"]);
    let mut heat = Table::new("fig3_heatmap", &["theta", "t", "m", "lattice", "probability"]);
    let mut routing = Table::new("fig3_routing", &["theta", "T_a", "T_b", "R_a", "R_b", "max_P_e"]);
    let mut drift: f64 = 0.0;
    for (c, traj) in configs.iter().zip(&trajs) {
        let theta = c.physics.theta();
        drift = drift.max(traj.norm_drift.abs());
        for s in &traj.snapshots {
            atom.push(vec![theta.into(), s.t.into(), s.p_e.into()]);
            for (lattice, probs) in [(Lattice::A, &s.prob_a), (Lattice::B, &s.prob_b)] {
                for (i, p) in probs.iter().enumerate() {
                    heat.push(vec![
                        theta.into(),
                        s.t.into(),
                        c.grid.site_label(i).into(),
                        lattice.label().into(),
                        (*p).into(),
                    ]);
                }
            }
        }
        let r = routing_coefficients(&traj.final_state, &c.grid, 3);
        routing.push(vec![theta.into(), r.t_a.into(), r.t_b.into(), r.r_a.into(), r.r_b.into(), traj.peak_p_e.into()]);
    }
    let examples = json!(configs.iter().map(ScenarioConfig::to_json).collect::<Vec<_>>());
    Ok(finish("fig3", start, examples, vec![atom, heat, routing], Some(drift), opts.dt()))
}

pub const FIG4A_SEPARATIONS: [usize; 4] = [1, 3, 33, 35];

fn fig4a(opts: &PresetOptions) -> Result<RunOutcome, Error> {
    let start = Instant::now();
    let thetas = theta_grid(THETA_POINTS);
    let mut configs = Vec::new();
    for n in FIG4A_SEPARATIONS {
        for &theta in &thetas {
            configs.push(equal_coupling_scenario(n, theta, 0.7, opts.dt())?);
        }
    }
    let runs = Collected::run(configs);
    if let Some(e) = runs.first_error() {
        return Err(Error::config("preset.fig4a", e.to_string()));
    }
    let mut t = Table::new("fig4a", &["theta", "N", "T_b_wavepacket", "T_b_analytic"]);
    for (c, r) in runs.configs.iter().zip(&runs.results) {
        let input = c.physics.scattering_input(c.packet.k_f)?;
        let analytic =
            crate::scattering::closed_form_amplitudes(&input).map(|a| a.coefficients().t_b).unwrap_or(f64::NAN);
        t.push(vec![input.theta.into(), input.n_sep.into(), point_t_b(r).into(), analytic.into()]);
    }
    let examples = json!([runs.configs[0].to_json()]);
    Ok(finish("fig4a", start, examples, vec![t], Some(runs.drift()), opts.dt()))
}

/// Points of the analytic θ grid.
pub const FIG4B_POINTS: usize = 201;

fn fig4b(opts: &PresetOptions) -> Result<RunOutcome, Error> {
    let start = Instant::now();
    let base = ScatteringInput::new(0.7, FRAC_PI_2, 3, 0.0);
    let rows = sweep(SweepKind::Theta, &base, &theta_grid(FIG4B_POINTS))?;
    let mut t = Table::new("fig4b", &["theta", "T_a_analytic", "T_b_analytic"]);
    for r in rows {
        t.push(vec![r.value.into(), r.t_a.into(), r.t_b.into()]);
    }
    Ok(finish("fig4b", start, json!([{ "scattering": base }]), vec![t], None, opts.dt()))
}

/// Heat-map window and time spacing of the catch-and-release preset.
pub const APPC_HEATMAP_SITES: (i64, i64) = (-150, 180);
pub const APPC_HEATMAP_EVERY: usize = 2;

fn app_c(opts: &PresetOptions) -> Result<RunOutcome, Error> {
    let start = Instant::now();
    let readings = [("swapped", 0.7, 4.0), ("reference", 4.0, 0.7)];
    let configs =
        readings.iter().map(|(_, g0, gn)| catch_scenario(*g0, *gn, opts.dt())).collect::<Result<Vec<_>, _>>()?;
    let trajs: Vec<_> = {
        use rayon::prelude::*;
        configs.par_iter().map(run_evolution).collect::<Result<Vec<_>, _>>()?
    };
    let mut series = Table::new("appC_catch", &["reading", "t", "theta", "P_C_a", "P_C_b", "P_C_total"]);
    let mut drift: f64 = 0.0;
    for ((name, ..), (c, traj)) in readings.iter().zip(configs.iter().zip(&trajs)) {
        drift = drift.max(traj.norm_drift.abs());
        for row in catch_series_table(c, traj).rows {
            let mut r = vec![Cell::from(*name)];
            r.extend(row);
            series.push(r);
        }
    }
    let (c, traj) = (&configs[1], &trajs[1]);
    let mut heat = Table::new("appC_heatmap", &["t", "m", "lattice", "probability"]);
    for s in traj.snapshots.iter().step_by(APPC_HEATMAP_EVERY) {
        for (lattice, probs) in [(Lattice::A, &s.prob_a), (Lattice::B, &s.prob_b)] {
            for m in APPC_HEATMAP_SITES.0..=APPC_HEATMAP_SITES.1 {
                let i = c.grid.site_index(m).expect("window inside grid");
                heat.push(vec![s.t.into(), m.into(), lattice.label().into(), probs[i].into()]);
            }
        }
    }
    let examples = json!(configs.iter().map(ScenarioConfig::to_json).collect::<Vec<_>>());
    Ok(finish("appC", start, examples, vec![series, heat], Some(drift), opts.dt()))
}

pub fn run_preset(name: &str, opts: &PresetOptions) -> Result<RunOutcome, Error> {
    match name {
        "fig2a" => fig2a(opts),
        "fig2b" => fig2b(opts),
        "fig3" => fig3(opts),
        "fig4a" => fig4a(opts),
        "fig4b" => fig4b(opts),
        "appC" => app_c(opts),
        _ => Err(Error::config("preset", format!("unknown preset `{name}`; expected one of {}", PRESETS.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_preset() {
        let err = run_preset("fig9", &PresetOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn fig4b_reaches_full_routing() {
        let out = run_preset("fig4b", &PresetOptions::default()).unwrap();
        let t = out.table("fig4b").unwrap();
        assert_eq!(t.rows.len(), FIG4B_POINTS);
        let theta = t.numbers("theta").unwrap();
        let tb = t.numbers("T_b_analytic").unwrap();
        let i = theta.iter().position(|x| (x + FRAC_PI_2).abs() < 1e-12).unwrap();
        assert!((tb[i] - 1.0).abs() < 1e-12);
        assert_eq!(out.manifest.preset(), Some("fig4b"));
    }

    #[test]
    fn preset_scenarios_validate() {
        for n in 1..=4 {
            reference_scenario(n, 0.0, true, DEFAULT_DT).unwrap();
        }
        for n in FIG4A_SEPARATIONS {
            equal_coupling_scenario(n, 0.0, 0.7, DEFAULT_DT).unwrap();
        }
        catch_scenario(0.7, 4.0, DEFAULT_DT).unwrap();
        catch_scenario(4.0, 0.7, DEFAULT_DT).unwrap();
        assert!(reference_scenario(1, 0.0, true, 5.0).is_err());
    }
}
