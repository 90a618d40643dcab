//! Initial states, fixed-step time evolution with a drive-phase schedule,
//! and routing observables.

mod integrate;
mod observables;
mod packet;
mod validate;

use thiserror::Error;

pub use integrate::{evolve, EvolveOptions, PhaseSchedule, PhaseSwitch, Snapshot, Trajectory, INSTABILITY_NORM_GROWTH};
pub use observables::{
    catch_probability, mean_position, routing_coefficients, window_weight, CatchProbability, RoutingResult,
};
pub use packet::{catch_initial_state, gaussian_packet, CatchSpec, PacketSpec, PhaseOrigin, SUPPORT_SIGMAS};
pub use validate::{ScenarioGeometry, MAX_STABLE_PHASE_STEP};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid packet: {0}")]
    InvalidPacket(String),
    #[error("invalid phase schedule: {0}")]
    InvalidSchedule(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("invalid time step dt = {dt}: {reason}")]
    InvalidStep { dt: f64, reason: String },
    #[error("integration unstable with dt = {dt}: norm reached {norm} at t = {t}")]
    Unstable { dt: f64, t: f64, norm: f64 },
}
