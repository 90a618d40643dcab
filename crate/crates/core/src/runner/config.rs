use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    CatchSpec, PacketSpec, PhaseOrigin, PhaseSchedule, PhaseSwitch, ScenarioGeometry, MAX_STABLE_PHASE_STEP,
    SUPPORT_SIGMAS,
};
use crate::model::{
    build_generator, derive_effective_params, AdiabaticThresholds, EffectiveParams, FullModelParams, GeneratorParams,
    Lattice, LatticeGrid, ModelKind,
};
use crate::scattering::{ScatteringInput, SweepKind};
use crate::Error;

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_SITES: usize = 400;
pub const DEFAULT_CATCH_SITES: usize = 800;
pub const DEFAULT_SNAPSHOT_STRIDE: usize = 100;
pub const DEFAULT_COUPLING: f64 = 0.7;
pub const DEFAULT_CATCH_T_END: f64 = 300.0;
pub const DEFAULT_RELEASE_TIME: f64 = 200.0;
pub const DEFAULT_SWEEP_POINTS: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    #[default]
    Evolve,
    Scatter,
    Sweep,
    CatchRelease,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Self::Evolve => "evolve",
            Self::Scatter => "scatter",
            Self::Sweep => "sweep",
            Self::CatchRelease => "catch_release",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Closed-form stationary coefficients.
    #[default]
    Analytic,
    /// One wave-packet evolution per point.
    Wavepacket,
}

macro_rules! raw_section {
    ($(#[$meta:meta])* $name:ident { $($field:ident : $ty:ty),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }
    };
}

raw_section!(RawGrid { n_sites: usize, site0: usize });
raw_section!(RawPacket { m0: i64, sigma: f64, k_f: f64, lattice: Lattice });
raw_section!(RawCatch { sigma: f64, phase_origin: PhaseOrigin });
raw_section!(RawIntegrator { dt: f64, t_end: f64, snapshot_stride: usize, keep_amplitudes: bool });
raw_section!(RawOutput { format: OutputFormat, heatmap: bool });
raw_section!(RawSweep { kind: SweepKind, mode: SweepMode, values: Vec<f64>, start: f64, stop: f64, points: usize });

/// Configuration document as written, before defaults and validation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_sep: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Shorthand for `g0_prime = gN = g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<f64>,
    #[serde(rename = "gN", default, skip_serializing_if = "Option::is_none")]
    pub g_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta0_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_e_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_delta0: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<RawGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packet: Option<RawPacket>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catch: Option<RawCatch>,
    /// Phase switches after `t = 0`; the phase at `t = 0` is `theta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<PhaseSwitch>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<RawIntegrator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<RawSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<RawOutput>,
}

const TOP_LEVEL_KEYS: &[&str] = &[
    "task",
    "model",
    "J",
    "N",
    "theta",
    "g",
    "g0",
    "gN",
    "eta",
    "delta_e",
    "delta_f",
    "gamma_e",
    "gamma_f",
    "g0_prime",
    "delta0_prime",
    "delta_e_prime",
    "include_delta0",
    "grid",
    "packet",
    "catch",
    "schedule",
    "integrator",
    "sweep",
    "output",
];

const SECTION_KEYS: &[(&str, &[&str])] = &[
    ("grid", &["n_sites", "site0"]),
    ("packet", &["m0", "sigma", "k_f", "lattice"]),
    ("catch", &["sigma", "phase_origin"]),
    ("integrator", &["dt", "t_end", "snapshot_stride", "keep_amplitudes"]),
    ("output", &["format", "heatmap"]),
    ("sweep", &["kind", "mode", "values", "start", "stop", "points"]),
];

const SWITCH_KEYS: &[&str] = &["t", "theta"];

fn strip_unknown(
    obj: &mut serde_json::Map<String, serde_json::Value>,
    known: &[&str],
    prefix: &str,
    out: &mut Vec<String>,
) {
    let unknown: Vec<String> = obj.keys().filter(|k| !known.contains(&k.as_str())).cloned().collect();
    for key in unknown {
        obj.remove(&key);
        out.push(format!("{prefix}{key}"));
    }
}

impl RawConfig {
    /// Parses a JSON document. Keys it does not know are removed and their
    /// paths returned alongside the config.
    pub fn from_json(text: &str) -> Result<(Self, Vec<String>), Error> {
        let mut doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::config("<document>", e.to_string()))?;
        let mut unknown = Vec::new();
        let top = doc.as_object_mut().ok_or_else(|| Error::config("<document>", "expected a JSON object"))?;
        strip_unknown(top, TOP_LEVEL_KEYS, "", &mut unknown);
        for (section, keys) in SECTION_KEYS {
            if let Some(serde_json::Value::Object(obj)) = top.get_mut(*section) {
                strip_unknown(obj, keys, &format!("{section}."), &mut unknown);
            }
        }
        if let Some(serde_json::Value::Array(items)) = top.get_mut("schedule") {
            for (i, item) in items.iter_mut().enumerate() {
                if let serde_json::Value::Object(obj) = item {
                    strip_unknown(obj, SWITCH_KEYS, &format!("schedule[{i}]."), &mut unknown);
                }
            }
        }
        let raw: Self = serde_path_to_error::deserialize(doc).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<document>".to_string() } else { path };
            Error::config(field, e.inner().to_string())
        })?;
        Ok((raw, unknown))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Where the equations-of-motion parameters came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Physics {
    Full(FullModelParams),
    /// Effective model obtained by eliminating `|f⟩` from `full`.
    Derived {
        full: FullModelParams,
        params: EffectiveParams,
    },
    Effective(EffectiveParams),
}

impl Physics {
    pub fn kind(&self) -> ModelKind {
        match self {
            Self::Full(_) => ModelKind::Full,
            _ => ModelKind::Effective,
        }
    }

    pub fn generator_params(&self) -> GeneratorParams {
        match self {
            Self::Full(p) => GeneratorParams::Full(*p),
            Self::Derived { params, .. } | Self::Effective(params) => GeneratorParams::Effective(*params),
        }
    }

    pub fn n_sep(&self) -> usize {
        self.generator_params().n_sep()
    }

    pub fn theta(&self) -> f64 {
        self.generator_params().theta()
    }

    pub fn j(&self) -> f64 {
        match self {
            Self::Full(p) => p.j,
            Self::Derived { params, .. } | Self::Effective(params) => params.j,
        }
    }

    /// Adiabatic-elimination warnings for derived parameters.
    pub fn warnings(&self) -> Vec<String> {
        match self {
            Self::Derived { full, .. } => derive_effective_params(full, &AdiabaticThresholds::default())
                .map(|d| d.warnings.iter().map(ToString::to_string).collect())
                .unwrap_or_default(),
            _ => Vec::new(),
        }
    }

    /// Equal-coupling scattering input; fails when the stationary closed form
    /// does not describe these parameters.
    pub fn scattering_input(&self, k_f: f64) -> Result<ScatteringInput, Error> {
        let p = match self {
            Self::Full(_) => {
                return Err(Error::config("model", "stationary scattering needs the effective model"));
            }
            Self::Derived { params, .. } | Self::Effective(params) => params,
        };
        if p.include_delta0 {
            return Err(Error::config("include_delta0", "stationary scattering excludes the delta0' terms"));
        }
        if p.atom_detuning().abs() > 1e-12 * p.delta_e.abs().max(1.0) {
            return Err(Error::config("delta_e", "stationary scattering needs delta_e = delta_e'"));
        }
        if p.gamma_e != 0.0 {
            return Err(Error::config("gamma_e", "stationary scattering is lossless"));
        }
        if (p.g0_prime - p.g_n).abs() > 1e-9 * p.g_n.abs().max(1.0) {
            return Err(Error::config("gN", "stationary scattering needs g0' = gN"));
        }
        Ok(ScatteringInput { g: p.g_n, j: p.j, k_f, n_sep: p.n_sep, theta: p.theta })
    }

    fn map_effective(&mut self, f: impl Fn(&mut EffectiveParams), g: impl Fn(&mut FullModelParams)) {
        match self {
            Self::Full(p) => g(p),
            Self::Derived { full, params } => {
                g(full);
                f(params);
            }
            Self::Effective(p) => f(p),
        }
    }

    pub fn set_theta(&mut self, theta: f64) {
        self.map_effective(|p| p.theta = theta, |p| p.theta = theta);
    }

    pub fn set_n_sep(&mut self, n: usize) {
        self.map_effective(|p| p.n_sep = n, |p| p.n_sep = n);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub mode: SweepMode,
    pub values: Vec<f64>,
}

/// Fully resolved and validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub task: Task,
    pub physics: Physics,
    pub grid: LatticeGrid,
    pub packet: PacketSpec,
    pub catch: CatchSpec,
    pub schedule: Vec<PhaseSwitch>,
    pub dt: f64,
    pub t_end: f64,
    /// `false` when `t_end` follows from the packet geometry.
    pub t_end_explicit: bool,
    pub snapshot_stride: usize,
    pub keep_amplitudes: bool,
    pub sweep: Option<SweepSpec>,
    pub format: OutputFormat,
    pub heatmap: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: ScenarioConfig,
    /// Unknown or unused keys (lenient mode) and adiabaticity warnings.
    pub warnings: Vec<String>,
}

/// Parses and validates a JSON scenario. In strict mode unknown and unused
/// keys are errors; otherwise they become warnings.
pub fn parse_config(text: &str, strict: bool) -> Result<ParsedConfig, Error> {
    let (raw, unknown) = RawConfig::from_json(text)?;
    resolve_config(raw, unknown, strict)
}

/// Applies defaults and validates `raw`; `unknown` lists keys the parser
/// did not recognise.
pub fn resolve_config(raw: RawConfig, unknown: Vec<String>, strict: bool) -> Result<ParsedConfig, Error> {
    if strict {
        if let Some(key) = unknown.first() {
            return Err(Error::config(key.clone(), "unknown key"));
        }
    }
    let mut warnings: Vec<String> = unknown.iter().map(|k| format!("unknown key `{k}` ignored")).collect();
    let config = ScenarioConfig::resolve(&raw)?;
    for key in unused_sections(&raw, &config) {
        if strict {
            return Err(Error::config(key, format!("not used by task `{}`", config.task.name())));
        }
        warnings.push(format!("key `{key}` is not used by task `{}`", config.task.name()));
    }
    warnings.extend(config.physics.warnings());
    Ok(ParsedConfig { config, warnings })
}

fn wavepacket_sweep(cfg: &ScenarioConfig) -> bool {
    cfg.sweep.as_ref().is_some_and(|s| s.mode == SweepMode::Wavepacket)
}

fn uses(cfg: &ScenarioConfig) -> [(&'static str, bool); 6] {
    let dynamic = matches!(cfg.task, Task::Evolve | Task::CatchRelease) || wavepacket_sweep(cfg);
    [
        ("grid", dynamic),
        ("packet", cfg.task != Task::CatchRelease),
        ("catch", cfg.task == Task::CatchRelease),
        ("schedule", dynamic),
        ("integrator", dynamic),
        ("sweep", cfg.task == Task::Sweep),
    ]
}

fn unused_sections(raw: &RawConfig, cfg: &ScenarioConfig) -> Vec<&'static str> {
    let present = [
        raw.grid.is_some(),
        raw.packet.is_some(),
        raw.catch.is_some(),
        raw.schedule.is_some(),
        raw.integrator.is_some(),
        raw.sweep.is_some(),
    ];
    uses(cfg).iter().zip(present).filter(|((_, used), p)| *p && !used).map(|((k, _), _)| *k).collect()
}

fn finite(field: &'static str, v: f64) -> Result<f64, Error> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(field, "must be finite"))
    }
}

fn forbid(field: &'static str, present: bool, why: &str) -> Result<(), Error> {
    if present {
        Err(Error::config(field, why.to_string()))
    } else {
        Ok(())
    }
}

fn resolve_physics(raw: &RawConfig) -> Result<Physics, Error> {
    let model = raw.model.unwrap_or(ModelKind::Effective);
    let n_sep = raw.n_sep.ok_or_else(|| Error::config("N", "required"))?;
    let theta = finite("theta", raw.theta.unwrap_or(0.0))?;
    let bare = raw.g0.is_some() || raw.eta.is_some() || raw.delta_f.is_some();

    let full = || -> Result<FullModelParams, Error> {
        let mut p = FullModelParams::reference(n_sep, theta);
        if let Some(j) = raw.j {
            p.j = j;
        }
        p.g0 = raw.g0.unwrap_or(p.g0);
        p.g_n = raw.g_n.unwrap_or(p.g_n);
        p.eta = raw.eta.unwrap_or(p.eta);
        p.delta_f = raw.delta_f.unwrap_or(p.delta_f);
        p.delta_e = raw.delta_e.unwrap_or(p.eta * p.eta / p.delta_f);
        p.gamma_e = raw.gamma_e.unwrap_or(0.0);
        p.gamma_f = raw.gamma_f.unwrap_or(0.0);
        p.validate()?;
        Ok(p)
    };

    let physics = match model {
        ModelKind::Full => {
            let why = "not a parameter of the full model";
            forbid("g", raw.g.is_some(), why)?;
            forbid("g0_prime", raw.g0_prime.is_some(), why)?;
            forbid("delta0_prime", raw.delta0_prime.is_some(), why)?;
            forbid("delta_e_prime", raw.delta_e_prime.is_some(), why)?;
            forbid("include_delta0", raw.include_delta0.is_some(), why)?;
            Physics::Full(full()?)
        }
        ModelKind::Effective if bare => {
            let why = "conflicts with the bare parameters g0/eta/delta_f";
            forbid("g", raw.g.is_some(), why)?;
            forbid("g0_prime", raw.g0_prime.is_some(), why)?;
            forbid("delta0_prime", raw.delta0_prime.is_some(), why)?;
            forbid("delta_e_prime", raw.delta_e_prime.is_some(), why)?;
            let full = full()?;
            let mut params = derive_effective_params(&full, &AdiabaticThresholds::default())?.params;
            params.include_delta0 = raw.include_delta0.unwrap_or(false);
            Physics::Derived { full, params }
        }
        ModelKind::Effective => {
            forbid("gamma_f", raw.gamma_f.is_some(), "the effective model has no |f> level")?;
            if raw.g.is_some() && (raw.g0_prime.is_some() || raw.g_n.is_some()) {
                return Err(Error::config("g", "give either g or g0_prime/gN"));
            }
            let g = raw.g.unwrap_or(DEFAULT_COUPLING);
            let mut p = EffectiveParams::equal_coupling(g, n_sep, theta);
            if let Some(j) = raw.j {
                p.j = j;
            }
            p.g0_prime = raw.g0_prime.unwrap_or(g);
            p.g_n = raw.g_n.unwrap_or(g);
            p.delta0_prime = raw.delta0_prime.unwrap_or(0.0);
            p.delta_e_prime = raw.delta_e_prime.unwrap_or(0.0);
            p.delta_e = raw.delta_e.unwrap_or(p.delta_e_prime);
            p.gamma_e = raw.gamma_e.unwrap_or(0.0);
            p.include_delta0 = raw.include_delta0.unwrap_or(false);
            p.validate()?;
            Physics::Effective(p)
        }
    };
    Ok(physics)
}

fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..points).map(|i| start + (stop - start) * i as f64 / (points - 1) as f64).collect(),
    }
}

fn resolve_sweep(raw: &RawSweep) -> Result<SweepSpec, Error> {
    let kind = raw.kind.ok_or_else(|| Error::config("sweep.kind", "required"))?;
    let mode = raw.mode.unwrap_or_default();
    let values = match (&raw.values, raw.start, raw.stop, raw.points) {
        (Some(v), None, None, None) => v.clone(),
        (Some(_), ..) => return Err(Error::config("sweep.values", "give either values or start/stop/points")),
        (None, None, None, None) if kind == SweepKind::Theta => linspace(-PI, PI, DEFAULT_SWEEP_POINTS),
        (None, Some(a), Some(b), points) => linspace(a, b, points.unwrap_or(DEFAULT_SWEEP_POINTS)),
        (None, ..) => return Err(Error::config("sweep.values", "give values or both start and stop")),
    };
    if values.is_empty() {
        return Err(Error::config("sweep.values", "sweep grid is empty"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::config("sweep.values", "values must be finite"));
    }
    if mode == SweepMode::Wavepacket && kind == SweepKind::Separation {
        if let Some(v) = values.iter().find(|v| **v < 1.0 || v.fract() != 0.0) {
            return Err(Error::config("sweep.values", format!("separation {v} is not a positive integer")));
        }
    }
    Ok(SweepSpec { kind, mode, values })
}

impl ScenarioConfig {
    pub fn resolve(raw: &RawConfig) -> Result<Self, Error> {
        let task = raw.task.unwrap_or_default();
        let physics = resolve_physics(raw)?;
        let catch_task = task == Task::CatchRelease;

        let rg = raw.grid.clone().unwrap_or_default();
        let n_sites = rg.n_sites.unwrap_or(if catch_task { DEFAULT_CATCH_SITES } else { DEFAULT_SITES });
        let site0 = rg.site0.unwrap_or(n_sites / 2);
        let grid = LatticeGrid::new(n_sites, site0).map_err(|e| Error::config("grid", e.to_string()))?;

        let rp = raw.packet.clone().unwrap_or_default();
        let defaults = PacketSpec::default();
        let packet = PacketSpec {
            m0: rp.m0.unwrap_or(defaults.m0),
            sigma: rp.sigma.unwrap_or(defaults.sigma),
            k_f: rp.k_f.unwrap_or(defaults.k_f),
            lattice: rp.lattice.unwrap_or(defaults.lattice),
        };
        if !(packet.sigma.is_finite() && packet.sigma > 0.0) {
            return Err(Error::config("packet.sigma", "must be > 0"));
        }
        if !(packet.k_f.is_finite() && packet.k_f != 0.0 && packet.k_f.abs() < PI) {
            return Err(Error::config("packet.k_f", "|k_f| must lie in (0, pi)"));
        }

        let rc = raw.catch.clone().unwrap_or_default();
        let catch = CatchSpec {
            sigma: rc.sigma.unwrap_or(CatchSpec::default().sigma),
            phase_origin: rc.phase_origin.unwrap_or_default(),
        };
        if !(catch.sigma.is_finite() && catch.sigma > 0.0) {
            return Err(Error::config("catch.sigma", "must be > 0"));
        }

        let schedule = match &raw.schedule {
            Some(s) => s.clone(),
            None if catch_task => vec![PhaseSwitch { t: DEFAULT_RELEASE_TIME, theta: PI }],
            None => Vec::new(),
        };
        PhaseSchedule::with_switches(physics.theta(), &schedule)
            .map_err(|e| Error::config("schedule", e.to_string()))?;

        let ri = raw.integrator.clone().unwrap_or_default();
        let dt = ri.dt.unwrap_or(DEFAULT_DT);
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::config("integrator.dt", "must be > 0"));
        }
        let j = physics.j();
        let t_end = match ri.t_end {
            Some(t) => t,
            None if catch_task => DEFAULT_CATCH_T_END,
            None => packet.default_t_end(physics.n_sep(), j),
        };
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::config("integrator.t_end", "must be > 0"));
        }
        let snapshot_stride = ri.snapshot_stride.unwrap_or(DEFAULT_SNAPSHOT_STRIDE);
        if snapshot_stride == 0 {
            return Err(Error::config("integrator.snapshot_stride", "must be >= 1"));
        }

        let sweep = match (&raw.sweep, task) {
            (Some(s), Task::Sweep) => Some(resolve_sweep(s)?),
            (None, Task::Sweep) => return Err(Error::config("sweep", "required for task `sweep`")),
            _ => None,
        };

        let ro = raw.output.clone().unwrap_or_default();
        let cfg = Self {
            task,
            physics,
            grid,
            packet,
            catch,
            schedule,
            dt,
            t_end,
            t_end_explicit: ri.t_end.is_some(),
            snapshot_stride,
            keep_amplitudes: ri.keep_amplitudes.unwrap_or(false),
            sweep,
            format: ro.format.unwrap_or_default(),
            heatmap: ro.heatmap.unwrap_or(true),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn is_dynamic(&self) -> bool {
        matches!(self.task, Task::Evolve | Task::CatchRelease) || wavepacket_sweep(self)
    }

    /// Boundary margins, wall round trips, step stability and the
    /// applicability of the closed form.
    pub fn validate(&self) -> Result<(), Error> {
        match &self.sweep {
            Some(s) if s.mode == SweepMode::Analytic => {
                self.physics.scattering_input(self.packet.k_f)?;
                return Ok(());
            }
            Some(s) if s.kind == SweepKind::Coupling && !matches!(self.physics, Physics::Effective(_)) => {
                return Err(Error::config(
                    "sweep.kind",
                    "wave-packet coupling sweeps need explicit effective couplings (g)",
                ));
            }
            Some(s) => {
                // check the extreme points of the sweep
                for v in [s.values[0], s.values[s.values.len() - 1]] {
                    self.at_sweep_value(s.kind, v)?.validate()?;
                }
                return Ok(());
            }
            None => {}
        }
        if self.task == Task::Scatter {
            self.physics.scattering_input(self.packet.k_f)?;
            return Ok(());
        }
        if !self.is_dynamic() {
            return Ok(());
        }
        let n_sep = self.physics.n_sep();
        let j = self.physics.j();
        let (center, sigma, speed, field) = if self.task == Task::CatchRelease {
            (CatchSpec::center(n_sep), self.catch.sigma, 2.0 * j, "catch.sigma")
        } else {
            (self.packet.m0, self.packet.sigma, self.packet.group_velocity(j).abs(), "packet.m0")
        };
        let lo = (center as f64 - SUPPORT_SIGMAS * sigma).floor() as i64;
        let hi = (center as f64 + SUPPORT_SIGMAS * sigma).ceil() as i64;
        if !self.grid.contains(lo) || !self.grid.contains(hi) {
            return Err(Error::config(
                field,
                format!(
                    "initial support [{lo}, {hi}] (centre ± {SUPPORT_SIGMAS}σ) exceeds the grid [{}, {}]",
                    self.grid.m_min(),
                    self.grid.m_max()
                ),
            ));
        }
        ScenarioGeometry { n_sep, center, sigma, speed, t_end: self.t_end }
            .validate(&self.grid)
            .map_err(|e| Error::config("grid.n_sites", e.to_string()))?;
        let gen = build_generator(&self.physics.generator_params(), &self.grid)
            .map_err(|e| Error::config("N", e.to_string()))?;
        let step = self.dt * gen.spectral_bound();
        if step > MAX_STABLE_PHASE_STEP {
            return Err(Error::config(
                "integrator.dt",
                format!("dt × spectral bound = {step:.3} exceeds {MAX_STABLE_PHASE_STEP}"),
            ));
        }
        Ok(())
    }

    /// Single-run evolve scenario at one wave-packet sweep point.
    pub fn at_sweep_value(&self, kind: SweepKind, value: f64) -> Result<Self, Error> {
        let mut cfg = self.clone();
        cfg.task = Task::Evolve;
        cfg.sweep = None;
        match kind {
            SweepKind::Theta => cfg.physics.set_theta(value),
            SweepKind::Separation => {
                if !(value >= 1.0 && value.fract() == 0.0) {
                    return Err(Error::config("sweep.values", format!("separation {value} is not a positive integer")));
                }
                cfg.physics.set_n_sep(value as usize);
            }
            SweepKind::Coupling => match &mut cfg.physics {
                Physics::Effective(p) => {
                    p.g0_prime = value;
                    p.g_n = value;
                }
                _ => return Err(Error::config("sweep.kind", "coupling sweeps need explicit effective couplings")),
            },
            SweepKind::Wavevector => cfg.packet.k_f = value,
        }
        if !cfg.t_end_explicit {
            cfg.t_end = cfg.packet.default_t_end(cfg.physics.n_sep(), cfg.physics.j());
        }
        match cfg.physics.generator_params() {
            GeneratorParams::Full(p) => p.validate()?,
            GeneratorParams::Effective(p) => p.validate()?,
        }
        if !(cfg.packet.k_f.is_finite() && cfg.packet.k_f != 0.0 && cfg.packet.k_f.abs() < PI) {
            return Err(Error::config("sweep.values", "|k_f| must lie in (0, pi)"));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn phase_schedule(&self) -> PhaseSchedule {
        PhaseSchedule::with_switches(self.physics.theta(), &self.schedule).expect("validated schedule")
    }

    /// Equivalent document with every default written out; resolves back to
    /// an identical config.
    pub fn to_raw(&self) -> RawConfig {
        let mut raw = RawConfig {
            task: Some(self.task),
            model: Some(self.physics.kind()),
            n_sep: Some(self.physics.n_sep()),
            theta: Some(self.physics.theta()),
            j: Some(self.physics.j()),
            ..Default::default()
        };
        let set_full = |raw: &mut RawConfig, p: &FullModelParams| {
            raw.g0 = Some(p.g0);
            raw.g_n = Some(p.g_n);
            raw.eta = Some(p.eta);
            raw.delta_e = Some(p.delta_e);
            raw.delta_f = Some(p.delta_f);
            raw.gamma_e = Some(p.gamma_e);
            raw.gamma_f = Some(p.gamma_f);
        };
        match &self.physics {
            Physics::Full(p) => set_full(&mut raw, p),
            Physics::Derived { full, params } => {
                set_full(&mut raw, full);
                raw.include_delta0 = Some(params.include_delta0);
            }
            Physics::Effective(p) => {
                raw.g0_prime = Some(p.g0_prime);
                raw.g_n = Some(p.g_n);
                raw.delta0_prime = Some(p.delta0_prime);
                raw.delta_e_prime = Some(p.delta_e_prime);
                raw.delta_e = Some(p.delta_e);
                raw.gamma_e = Some(p.gamma_e);
                raw.include_delta0 = Some(p.include_delta0);
            }
        }
        let used = uses(self);
        let on = |name: &str| used.iter().any(|(k, u)| *k == name && *u);
        if on("grid") {
            raw.grid = Some(RawGrid { n_sites: Some(self.grid.n_sites()), site0: Some(self.grid.site0_index()) });
        }
        if on("packet") {
            raw.packet = Some(RawPacket {
                m0: Some(self.packet.m0),
                sigma: Some(self.packet.sigma),
                k_f: Some(self.packet.k_f),
                lattice: Some(self.packet.lattice),
            });
        }
        if on("catch") {
            raw.catch = Some(RawCatch { sigma: Some(self.catch.sigma), phase_origin: Some(self.catch.phase_origin) });
        }
        if on("schedule") {
            raw.schedule = Some(self.schedule.clone());
        }
        if on("integrator") {
            raw.integrator = Some(RawIntegrator {
                dt: Some(self.dt),
                t_end: self.t_end_explicit.then_some(self.t_end),
                snapshot_stride: Some(self.snapshot_stride),
                keep_amplitudes: Some(self.keep_amplitudes),
            });
        }
        if let Some(s) = &self.sweep {
            raw.sweep = Some(RawSweep {
                kind: Some(s.kind),
                mode: Some(s.mode),
                values: Some(s.values.clone()),
                ..Default::default()
            });
        }
        raw.output = Some(RawOutput { format: Some(self.format), heatmap: Some(self.heatmap) });
        raw
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_raw()).expect("config serializes")
    }
}
