//! Parameters, lattice layout, single-excitation state and the
//! equations-of-motion generators of the full three-level model and the
//! effective two-level giant atom.
//!
//! Energies are measured in units of the hopping `J` and times in `1/J`.

mod generator;
mod grid;
mod params;
mod state;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generator::{build_effective_generator, build_full_generator, build_generator, Generator, GeneratorParams};
pub use grid::{AtomLevel, Lattice, LatticeGrid};
pub use params::{
    derive_effective_params, AdiabaticThresholds, AdiabaticWarning, BareFrequencies, Derivation, EffectiveParams,
    FullModelParams,
};
pub use state::SingleExcitationState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Driven three-level atom, levels `|e⟩` and `|f⟩` kept.
    Full,
    /// Two-level giant atom with `|f⟩` eliminated.
    Effective,
}

impl ModelKind {
    pub fn atom_levels(self) -> usize {
        match self {
            Self::Full => 2,
            Self::Effective => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: &'static str },
    #[error("configuration error: {0}")]
    Configuration(String),
}

impl ModelError {
    pub(crate) fn invalid(field: &'static str, reason: &'static str) -> Self {
        Self::InvalidParameter { field, reason }
    }
}
