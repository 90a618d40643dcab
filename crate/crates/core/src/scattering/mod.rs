//! Stationary single-photon scattering off the equal-coupling giant atom.
//!
//! A plane wave `e^{ikm}` is incident from the left on lattice a. The field
//! on each lattice is piecewise: incident plus reflected for `m < 0`, a
//! left/right superposition on `0 ≤ m ≤ N` and transmitted for `m > N`.

mod closed;
mod linalg;
mod oracle;
mod sweep;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use closed::{closed_form_amplitudes, from_right};
pub use oracle::{jump_oracle_amplitudes, oracle_amplitudes};
pub use sweep::{sweep, SweepKind, SweepRow};

/// Smallest `|D|` accepted before the closed form is declared singular.
pub const SINGULAR_DENOMINATOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error("invalid scattering input `{field}`: {reason}")]
    InvalidInput { field: &'static str, reason: &'static str },
    #[error("singular point at k = {k}, N = {n_sep}, theta = {theta}: {reason}")]
    Singular { k: f64, n_sep: usize, theta: f64, reason: String },
    #[error("empty sweep grid")]
    EmptyGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringInput {
    /// Equal coupling `g = g₀′ = g_N`.
    pub g: f64,
    pub j: f64,
    pub k_f: f64,
    pub n_sep: usize,
    pub theta: f64,
}

impl ScatteringInput {
    pub fn new(g: f64, k_f: f64, n_sep: usize, theta: f64) -> Self {
        Self { g, j: 1.0, k_f, n_sep, theta }
    }

    /// `E_f = −2J cos k_f`
    pub fn energy(&self) -> f64 {
        -2.0 * self.j * self.k_f.cos()
    }

    /// `ξ = 2 sin(kN) cos θ + J² sin(2k) / g²`
    pub fn xi(&self) -> f64 {
        let kn = self.k_f * self.n_sep as f64;
        2.0 * kn.sin() * self.theta.cos() + self.j * self.j * (2.0 * self.k_f).sin() / (self.g * self.g)
    }

    pub fn validate(&self) -> Result<(), ScatteringError> {
        let bad = |field, reason| Err(ScatteringError::InvalidInput { field, reason });
        if !(self.g.is_finite() && self.g >= 0.0) {
            return bad("g", "must be finite and >= 0");
        }
        if !(self.j.is_finite() && self.j > 0.0) {
            return bad("J", "must be finite and > 0");
        }
        if !(self.k_f.is_finite() && self.k_f > 0.0 && self.k_f < std::f64::consts::PI) {
            return bad("k_f", "must lie in (0, pi)");
        }
        if !self.theta.is_finite() {
            return bad("theta", "must be finite");
        }
        Ok(())
    }

    pub(crate) fn singular(&self, reason: impl Into<String>) -> ScatteringError {
        ScatteringError::Singular { k: self.k_f, n_sep: self.n_sep, theta: self.theta, reason: reason.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringAmplitudes {
    pub r_a: Complex64,
    pub l_al: Complex64,
    pub l_ar: Complex64,
    pub t_a: Complex64,
    pub r_b: Complex64,
    pub l_bl: Complex64,
    pub l_br: Complex64,
    pub t_b: Complex64,
    /// Infinite in the decoupled limit `g = 0`.
    pub xi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    #[serde(rename = "T_a")]
    pub t_a: f64,
    #[serde(rename = "T_b")]
    pub t_b: f64,
    #[serde(rename = "R_a")]
    pub r_a: f64,
    #[serde(rename = "R_b")]
    pub r_b: f64,
}

impl Coefficients {
    pub fn total(&self) -> f64 {
        self.t_a + self.t_b + self.r_a + self.r_b
    }
}

impl ScatteringAmplitudes {
    /// `(r_a, l_al, l_ar, t_a, r_b, l_bl, l_br, t_b)`
    pub fn to_array(&self) -> [Complex64; 8] {
        [self.r_a, self.l_al, self.l_ar, self.t_a, self.r_b, self.l_bl, self.l_br, self.t_b]
    }

    pub(crate) fn from_array(v: [Complex64; 8], xi: f64) -> Self {
        let [r_a, l_al, l_ar, t_a, r_b, l_bl, l_br, t_b] = v;
        Self { r_a, l_al, l_ar, t_a, r_b, l_bl, l_br, t_b, xi }
    }

    pub fn coefficients(&self) -> Coefficients {
        Coefficients {
            t_a: self.t_a.norm_sqr(),
            t_b: self.t_b.norm_sqr(),
            r_a: self.r_a.norm_sqr(),
            r_b: self.r_b.norm_sqr(),
        }
    }

    pub fn flux(&self) -> f64 {
        self.coefficients().total()
    }

    /// Largest componentwise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array().iter().zip(other.to_array()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Field amplitudes `(u_m, v_m)` of the piecewise stationary solution.
    pub fn field(&self, input: &ScatteringInput, m: i64) -> (Complex64, Complex64) {
        let k = input.k_f;
        let fwd = Complex64::from_polar(1.0, k * m as f64);
        let bwd = fwd.conj();
        if m < 0 {
            (fwd + self.r_a * bwd, self.r_b * bwd)
        } else if m <= input.n_sep as i64 {
            (self.l_al * bwd + self.l_ar * fwd, self.l_bl * bwd + self.l_br * fwd)
        } else {
            (self.t_a * fwd, self.t_b * fwd)
        }
    }

    /// Atom amplitude from the jump of the lattice-a field across site 0.
    pub fn atom_amplitude(&self, input: &ScatteringInput) -> Complex64 {
        if input.g == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = input.k_f;
        let e = |m: f64| Complex64::from_polar(1.0, k * m);
        let outer = e(-1.0) + self.r_a * e(1.0);
        let inner = self.l_al * e(1.0) + self.l_ar * e(-1.0);
        input.j * (outer - inner) * Complex64::from_polar(1.0, input.theta) / input.g
    }

    /// Largest residual of the stationary equations over sites `m_lo..=m_hi`
    /// and the atom row, for the reconstructed field.
    pub fn stationary_residual(&self, input: &ScatteringInput, m_lo: i64, m_hi: i64) -> f64 {
        let (j, g, n) = (input.j, input.g, input.n_sep as i64);
        let energy = input.energy();
        let w = self.atom_amplitude(input);
        let phase = Complex64::from_polar(1.0, input.theta);
        let mut worst: f64 = 0.0;
        for m in m_lo..=m_hi {
            let (u, v) = self.field(input, m);
            let (up, vp) = self.field(input, m + 1);
            let (um, vm) = self.field(input, m - 1);
            let mut src = Complex64::new(0.0, 0.0);
            if m == 0 {
                src += g * phase.conj() * w;
            }
            if m == n {
                src += g * w;
            }
            let ru = energy * u + j * (up + um) - src;
            let rv = energy * v + j * (vp + vm) - src;
            worst = worst.max(ru.norm()).max(rv.norm());
        }
        let (u0, v0) = self.field(input, 0);
        let (un, vn) = self.field(input, n);
        let atom = energy * w - g * phase * (u0 + v0) - g * (un + vn);
        worst.max(atom.norm())
    }
}
