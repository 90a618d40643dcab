use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::validate::MAX_STABLE_PHASE_STEP;
use super::DynamicsError;
use crate::model::{AtomLevel, Generator, Lattice, ModelKind, SingleExcitationState};

/// Growth of `‖x‖²` beyond which a lossless run is declared unstable.
pub const INSTABILITY_NORM_GROWTH: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSwitch {
    /// Switch time in `1/J`.
    pub t: f64,
    pub theta: f64,
}

/// Piecewise-constant drive phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSchedule {
    segments: Vec<PhaseSwitch>,
}

impl PhaseSchedule {
    pub fn constant(theta: f64) -> Self {
        Self { segments: vec![PhaseSwitch { t: 0.0, theta }] }
    }

    /// Segments must start at `t = 0` with strictly increasing switch times.
    pub fn new(segments: Vec<PhaseSwitch>) -> Result<Self, DynamicsError> {
        match segments.first() {
            None => return Err(DynamicsError::InvalidSchedule("schedule is empty".into())),
            Some(first) if first.t != 0.0 => {
                return Err(DynamicsError::InvalidSchedule("first segment must start at t = 0".into()))
            }
            _ => {}
        }
        if segments.iter().any(|s| !s.t.is_finite() || !s.theta.is_finite()) {
            return Err(DynamicsError::InvalidSchedule("switch times and phases must be finite".into()));
        }
        if segments.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(DynamicsError::InvalidSchedule("switch times must be strictly increasing".into()));
        }
        Ok(Self { segments })
    }

    /// `θ` held from `t = 0`, then switched at each `(t, θ)`.
    pub fn with_switches(theta0: f64, switches: &[PhaseSwitch]) -> Result<Self, DynamicsError> {
        let mut segments = vec![PhaseSwitch { t: 0.0, theta: theta0 }];
        segments.extend_from_slice(switches);
        Self::new(segments)
    }

    pub fn segments(&self) -> &[PhaseSwitch] {
        &self.segments
    }

    pub fn theta_at(&self, t: f64) -> f64 {
        self.segments.iter().take_while(|s| s.t <= t).last().map_or(self.segments[0].theta, |s| s.theta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub t_end: f64,
    pub dt: f64,
    pub snapshot_stride: usize,
    /// Keep complex amplitudes for every snapshot, not only probabilities.
    pub keep_amplitudes: bool,
    pub schedule: Option<PhaseSchedule>,
}

impl EvolveOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self { t_end, dt, snapshot_stride: 100, keep_amplitudes: false, schedule: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub theta: f64,
    pub prob_a: Vec<f64>,
    pub prob_b: Vec<f64>,
    pub p_e: f64,
    pub p_f: Option<f64>,
    pub norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Complex64>>,
}

impl Snapshot {
    fn record(state: &SingleExcitationState, theta: f64, keep: bool) -> Self {
        Self {
            t: state.time,
            theta,
            prob_a: state.probabilities(Lattice::A),
            prob_b: state.probabilities(Lattice::B),
            p_e: state.atom(AtomLevel::E).norm_sqr(),
            p_f: (state.kind() == ModelKind::Full).then(|| state.atom(AtomLevel::F).norm_sqr()),
            norm: state.norm_sqr(),
            amplitudes: keep.then(|| state.amplitudes.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dt: f64,
    pub steps: usize,
    pub snapshots: Vec<Snapshot>,
    /// Largest `|w_e|²` over every step, not only snapshots.
    pub peak_p_e: f64,
    /// `‖x(t_end)‖² − ‖x(0)‖²`
    pub norm_drift: f64,
    pub final_state: SingleExcitationState,
}

/// Integrates `dx/dt = gen(x)` with the classical fixed-step fourth-order
/// Runge–Kutta scheme.
///
/// Phase switches are snapped to the nearest step. Snapshots are taken at
/// `t = 0`, every `snapshot_stride` steps and at the final step.
pub fn evolve(
    gen: &Generator,
    state0: &SingleExcitationState,
    opts: &EvolveOptions,
) -> Result<Trajectory, DynamicsError> {
    let dim = gen.dim();
    if state0.amplitudes.len() != dim || state0.kind() != gen.kind() {
        return Err(DynamicsError::Configuration(format!(
            "state of dimension {} does not match the {:?} generator of dimension {dim}",
            state0.amplitudes.len(),
            gen.kind()
        )));
    }
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(DynamicsError::InvalidStep { dt: opts.dt, reason: "dt must be positive".into() });
    }
    if !(opts.t_end.is_finite() && opts.t_end >= 0.0) {
        return Err(DynamicsError::Configuration("t_end must be finite and >= 0".into()));
    }
    if opts.snapshot_stride == 0 {
        return Err(DynamicsError::Configuration("snapshot_stride must be >= 1".into()));
    }
    let phase_step = opts.dt * gen.spectral_bound();
    if phase_step > MAX_STABLE_PHASE_STEP {
        return Err(DynamicsError::InvalidStep {
            dt: opts.dt,
            reason: format!(
                "dt × spectral bound = {phase_step:.3} exceeds the stability limit {MAX_STABLE_PHASE_STEP}"
            ),
        });
    }

    let mut gen = gen.clone();
    let steps = (opts.t_end / opts.dt - 1e-9).ceil().max(0.0) as usize;
    let switches: Vec<(usize, f64)> = match &opts.schedule {
        Some(s) => s.segments().iter().map(|seg| ((seg.t / opts.dt).round() as usize, seg.theta)).collect(),
        None => vec![(0, gen.theta())],
    };
    let mut next_switch = 0;
    let mut apply_switches = |step: usize, gen: &mut Generator| {
        while next_switch < switches.len() && switches[next_switch].0 <= step {
            gen.set_theta(switches[next_switch].1);
            next_switch += 1;
        }
    };
    apply_switches(0, &mut gen);

    let mut x = state0.clone();
    let t0 = x.time;
    let norm0 = x.norm_sqr();
    let lossless = gen.is_lossless();
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; dim], vec![zero; dim], vec![zero; dim], vec![zero; dim]);
    let mut tmp = vec![zero; dim];
    let dt = opts.dt;
    let (h2, h6) = (0.5 * dt, dt / 6.0);

    let mut snapshots = vec![Snapshot::record(&x, gen.theta(), opts.keep_amplitudes)];
    let mut peak_p_e = x.atom(AtomLevel::E).norm_sqr();

    for step in 0..steps {
        apply_switches(step, &mut gen);
        let y = &mut x.amplitudes;
        gen.apply(y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + h2 * k1[i];
        }
        gen.apply(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + h2 * k2[i];
        }
        gen.apply(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + dt * k3[i];
        }
        gen.apply(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += h6 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        x.time = t0 + (step + 1) as f64 * dt;

        let norm = x.norm_sqr();
        if !norm.is_finite() || (lossless && norm > norm0 * (1.0 + INSTABILITY_NORM_GROWTH)) {
            return Err(DynamicsError::Unstable { dt, t: x.time, norm });
        }
        peak_p_e = peak_p_e.max(x.atom(AtomLevel::E).norm_sqr());
        if (step + 1) % opts.snapshot_stride == 0 || step + 1 == steps {
            snapshots.push(Snapshot::record(&x, gen.theta(), opts.keep_amplitudes));
        }
    }

    Ok(Trajectory { dt, steps, snapshots, peak_p_e, norm_drift: x.norm_sqr() - norm0, final_state: x })
}
