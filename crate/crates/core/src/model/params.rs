use serde::{Deserialize, Serialize};

use super::ModelError;

/// Bare level and mode frequencies. They have no dynamical role once the
/// rotating frame is taken and only enter through the detunings and the
/// three-photon resonance condition, so they are kept as metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BareFrequencies {
    pub omega_e: f64,
    pub omega_f: f64,
    pub omega_d: f64,
    pub omega_0: f64,
    /// Free spectral range (lattice spacing in frequency).
    pub omega_s: f64,
}

impl BareFrequencies {
    /// `ω_d + ω_0 − ω_N` with `ω_N = ω_0 + N Ω_s`; zero on three-photon resonance.
    pub fn resonance_mismatch(&self, n_sep: usize) -> f64 {
        self.omega_d + self.omega_0 - (self.omega_0 + n_sep as f64 * self.omega_s)
    }
}

/// Couplings of the driven three-level atom and the two frequency lattices.
///
/// Energies are in units of the hopping `j`; couplings are real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullModelParams {
    pub j: f64,
    /// `|g⟩ ↔ |f⟩` coupling to site 0 of each lattice.
    pub g0: f64,
    /// `|g⟩ ↔ |e⟩` coupling to site N of each lattice.
    pub g_n: f64,
    pub eta: f64,
    pub theta: f64,
    pub delta_e: f64,
    pub delta_f: f64,
    pub gamma_e: f64,
    pub gamma_f: f64,
    pub n_sep: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequencies: Option<BareFrequencies>,
}

impl FullModelParams {
    /// Main-text couplings: `g0 = 4J`, `gN = 0.7J`, `η = 17.5J`, `Δf = 100J`,
    /// with `Δe` set to the Lamb shift `η²/Δf` so the effective atom is resonant.
    pub fn reference(n_sep: usize, theta: f64) -> Self {
        let (eta, delta_f) = (17.5, 100.0);
        Self {
            j: 1.0,
            g0: 4.0,
            g_n: 0.7,
            eta,
            theta,
            delta_e: eta * eta / delta_f,
            delta_f,
            gamma_e: 0.0,
            gamma_f: 0.0,
            n_sep,
            frequencies: None,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        check_finite("J", self.j)?;
        for (name, v) in [
            ("g0", self.g0),
            ("gN", self.g_n),
            ("eta", self.eta),
            ("theta", self.theta),
            ("delta_e", self.delta_e),
            ("delta_f", self.delta_f),
            ("gamma_e", self.gamma_e),
            ("gamma_f", self.gamma_f),
        ] {
            check_finite(name, v)?;
        }
        if self.j <= 0.0 {
            return Err(ModelError::invalid("J", "must be > 0"));
        }
        if self.n_sep < 1 {
            return Err(ModelError::invalid("N", "must be >= 1"));
        }
        if self.gamma_e < 0.0 {
            return Err(ModelError::invalid("gamma_e", "must be >= 0"));
        }
        if self.gamma_f < 0.0 {
            return Err(ModelError::invalid("gamma_f", "must be >= 0"));
        }
        Ok(())
    }

    pub fn is_lossless(&self) -> bool {
        self.gamma_e == 0.0 && self.gamma_f == 0.0
    }
}

/// Two-level giant-atom model left after eliminating `|f⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub j: f64,
    pub g0_prime: f64,
    pub g_n: f64,
    /// Site-0 self shift and a₀–b₀ cross coupling.
    pub delta0_prime: f64,
    /// Lamb shift of `|e⟩`.
    pub delta_e_prime: f64,
    pub delta_e: f64,
    pub theta: f64,
    pub gamma_e: f64,
    pub n_sep: usize,
    /// Keep the `Δ0'` terms in the lattice rows.
    pub include_delta0: bool,
}

impl EffectiveParams {
    /// Equal couplings `g0' = gN = g`, resonant atom, no `Δ0'` terms.
    pub fn equal_coupling(g: f64, n_sep: usize, theta: f64) -> Self {
        Self {
            j: 1.0,
            g0_prime: g,
            g_n: g,
            delta0_prime: 0.0,
            delta_e_prime: 0.0,
            delta_e: 0.0,
            theta,
            gamma_e: 0.0,
            n_sep,
            include_delta0: false,
        }
    }

    /// Net diagonal energy of `|e⟩` (without dissipation).
    pub fn atom_detuning(&self) -> f64 {
        self.delta_e_prime - self.delta_e
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, v) in [
            ("J", self.j),
            ("g0_prime", self.g0_prime),
            ("gN", self.g_n),
            ("delta0_prime", self.delta0_prime),
            ("delta_e_prime", self.delta_e_prime),
            ("delta_e", self.delta_e),
            ("theta", self.theta),
            ("gamma_e", self.gamma_e),
        ] {
            check_finite(name, v)?;
        }
        if self.j <= 0.0 {
            return Err(ModelError::invalid("J", "must be > 0"));
        }
        if self.n_sep < 1 {
            return Err(ModelError::invalid("N", "must be >= 1"));
        }
        if self.gamma_e < 0.0 {
            return Err(ModelError::invalid("gamma_e", "must be >= 0"));
        }
        Ok(())
    }
}

fn check_finite(name: &'static str, v: f64) -> Result<(), ModelError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ModelError::invalid(name, "must be finite"))
    }
}

/// Ratios above which [`derive_effective_params`] flags the elimination as
/// outside its regime of validity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticThresholds {
    /// Limit on `η/Δf`.
    pub drive_ratio: f64,
    /// Limit on `g0/Δf`.
    pub coupling_ratio: f64,
    /// Limit on `|Δe' − Δe| / gN`, the residual detuning of `|e⟩`.
    pub detuning_ratio: f64,
}

impl Default for AdiabaticThresholds {
    fn default() -> Self {
        Self { drive_ratio: 0.25, coupling_ratio: 0.25, detuning_ratio: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum AdiabaticWarning {
    DriveNotSmall { ratio: f64, limit: f64 },
    CouplingNotSmall { ratio: f64, limit: f64 },
    AtomOffResonance { ratio: f64, limit: f64 },
}

impl std::fmt::Display for AdiabaticWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::DriveNotSmall { ratio, limit } => {
                write!(f, "eta/delta_f = {ratio:.4} exceeds {limit}; adiabatic elimination is questionable")
            }
            Self::CouplingNotSmall { ratio, limit } => {
                write!(f, "g0/delta_f = {ratio:.4} exceeds {limit}; adiabatic elimination is questionable")
            }
            Self::AtomOffResonance { ratio, limit } => {
                write!(f, "|delta_e' - delta_e|/gN = {ratio:.4} exceeds {limit}; |e> is not near resonance")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub params: EffectiveParams,
    pub warnings: Vec<AdiabaticWarning>,
}

/// Adiabatically eliminates `|f⟩`:
/// `g0' = g0 η/Δf`, `Δ0' = g0²/Δf`, `Δe' = η²/Δf`.
///
/// The `Δ0'` terms are carried but switched off (`include_delta0 = false`).
pub fn derive_effective_params(
    full: &FullModelParams,
    thresholds: &AdiabaticThresholds,
) -> Result<Derivation, ModelError> {
    full.validate()?;
    if full.delta_f == 0.0 {
        return Err(ModelError::invalid("delta_f", "must be nonzero for adiabatic elimination"));
    }
    let params = EffectiveParams {
        j: full.j,
        g0_prime: full.g0 * full.eta / full.delta_f,
        g_n: full.g_n,
        delta0_prime: full.g0 * full.g0 / full.delta_f,
        delta_e_prime: full.eta * full.eta / full.delta_f,
        delta_e: full.delta_e,
        theta: full.theta,
        gamma_e: full.gamma_e,
        n_sep: full.n_sep,
        include_delta0: false,
    };

    let mut warnings = Vec::new();
    let drive = (full.eta / full.delta_f).abs();
    if drive > thresholds.drive_ratio {
        warnings.push(AdiabaticWarning::DriveNotSmall { ratio: drive, limit: thresholds.drive_ratio });
    }
    let coupling = (full.g0 / full.delta_f).abs();
    if coupling > thresholds.coupling_ratio {
        warnings.push(AdiabaticWarning::CouplingNotSmall { ratio: coupling, limit: thresholds.coupling_ratio });
    }
    if full.g_n != 0.0 {
        let residual = (params.atom_detuning() / full.g_n).abs();
        if residual > thresholds.detuning_ratio {
            warnings.push(AdiabaticWarning::AtomOffResonance { ratio: residual, limit: thresholds.detuning_ratio });
        }
    }
    Ok(Derivation { params, warnings })
}
