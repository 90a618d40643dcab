//! Single-photon routing by a driven giant atom coupled to two synthetic
//! frequency lattices.
//!
//! * [`model`]: parameters, lattice layout and equations of motion of the full
//!   three-level model and the effective two-level giant atom.
//! * [`dynamics`]: wave-packet and catch-state preparation, fixed-step time
//!   evolution and routing observables.
//! * [`scattering`]: stationary plane-wave amplitudes in closed form with an
//!   independent linear-system check.
//! * [`runner`]: JSON configuration, named presets and CSV/JSON output.

pub mod dynamics;
pub mod model;
pub mod runner;
pub mod scattering;

mod error;

pub use error::Error;
