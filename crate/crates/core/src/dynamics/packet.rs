use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::model::{Lattice, LatticeGrid, ModelKind, SingleExcitationState};

/// Gaussian packet `exp[−(m−m0)²/(2σ²) + i k m]` on one lattice.
///
/// The sign of `k_f` sets the direction of travel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub m0: i64,
    pub sigma: f64,
    pub k_f: f64,
    pub lattice: Lattice,
}

impl Default for PacketSpec {
    fn default() -> Self {
        Self { m0: -100, sigma: 20.0, k_f: FRAC_PI_2, lattice: Lattice::A }
    }
}

/// Packet extent used for boundary checks, in units of σ.
pub const SUPPORT_SIGMAS: f64 = 5.0;

impl PacketSpec {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(DynamicsError::InvalidPacket("sigma must be > 0".into()));
        }
        if !(self.k_f.is_finite() && self.k_f != 0.0 && self.k_f.abs() < std::f64::consts::PI) {
            return Err(DynamicsError::InvalidPacket("|k_f| must lie in (0, pi)".into()));
        }
        Ok(())
    }

    /// Group velocity `2J sin k_f`.
    pub fn group_velocity(&self, j: f64) -> f64 {
        2.0 * j * self.k_f.sin()
    }

    /// `(|m0| + N + 4σ) / |v_g|`, rounded up: long enough for the packet to
    /// clear the coupling region.
    pub fn default_t_end(&self, n_sep: usize, j: f64) -> f64 {
        ((self.m0.unsigned_abs() as f64 + n_sep as f64 + 4.0 * self.sigma) / self.group_velocity(j).abs()).ceil()
    }
}

/// Where the two counter-propagating lobes of the catch state measure their
/// phase from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseOrigin {
    /// `e^{±iπ(m−c)/2}`: lobes in phase at the packet centre `c`, a real
    /// standing wave supported on sites of the same parity as `c`.
    #[default]
    Center,
    /// `e^{±iπm/2}`: phase measured from site 0, supported on even sites.
    Lattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatchSpec {
    pub sigma: f64,
    #[serde(default)]
    pub phase_origin: PhaseOrigin,
}

impl Default for CatchSpec {
    fn default() -> Self {
        Self { sigma: 16.0, phase_origin: PhaseOrigin::Center }
    }
}

impl CatchSpec {
    /// `⌊N/2⌋`
    pub fn center(n_sep: usize) -> i64 {
        (n_sep / 2) as i64
    }
}

fn check_support(grid: &LatticeGrid, center: i64, sigma: f64) -> Result<(), DynamicsError> {
    let lo = (center as f64 - SUPPORT_SIGMAS * sigma).floor() as i64;
    let hi = (center as f64 + SUPPORT_SIGMAS * sigma).ceil() as i64;
    if !grid.contains(lo) || !grid.contains(hi) {
        return Err(DynamicsError::Configuration(format!(
            "packet support [{lo}, {hi}] (center {center} ± {SUPPORT_SIGMAS}σ) exceeds the grid [{}, {}]",
            grid.m_min(),
            grid.m_max()
        )));
    }
    Ok(())
}

pub fn gaussian_packet(
    grid: &LatticeGrid,
    kind: ModelKind,
    spec: &PacketSpec,
) -> Result<SingleExcitationState, DynamicsError> {
    spec.validate()?;
    check_support(grid, spec.m0, spec.sigma)?;
    let mut state = SingleExcitationState::vacuum(grid, kind);
    let two_s2 = 2.0 * spec.sigma * spec.sigma;
    for (i, a) in state.lattice_mut(spec.lattice).iter_mut().enumerate() {
        let m = grid.site_label(i) as f64;
        let d = m - spec.m0 as f64;
        *a = Complex64::from_polar((-d * d / two_s2).exp(), spec.k_f * m);
    }
    state.normalize();
    Ok(state)
}

/// Two counter-propagating Gaussians (`k = ±π/2`) centred between the coupling
/// sites on the `a` lattice, normalised as a whole.
pub fn catch_initial_state(
    grid: &LatticeGrid,
    kind: ModelKind,
    n_sep: usize,
    spec: &CatchSpec,
) -> Result<SingleExcitationState, DynamicsError> {
    if !(spec.sigma.is_finite() && spec.sigma > 0.0) {
        return Err(DynamicsError::InvalidPacket("sigma must be > 0".into()));
    }
    let center = CatchSpec::center(n_sep);
    check_support(grid, center, spec.sigma)?;
    let origin = match spec.phase_origin {
        PhaseOrigin::Center => center as f64,
        PhaseOrigin::Lattice => 0.0,
    };
    let mut state = SingleExcitationState::vacuum(grid, kind);
    let two_s2 = 2.0 * spec.sigma * spec.sigma;
    for (i, a) in state.lattice_mut(Lattice::A).iter_mut().enumerate() {
        let m = grid.site_label(i) as f64;
        let d = m - center as f64;
        let envelope = (-d * d / two_s2).exp();
        let phase = FRAC_PI_2 * (m - origin);
        *a = Complex64::from_polar(envelope, phase) + Complex64::from_polar(envelope, -phase);
    }
    state.normalize();
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn packet_is_normalized_and_peaked() {
        let grid = LatticeGrid::default();
        let s = gaussian_packet(&grid, ModelKind::Effective, &PacketSpec::default()).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        let probs = s.probabilities(Lattice::A);
        let peak = probs.iter().cloned().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
        assert_eq!(grid.site_label(peak), -100);
        assert!(s.lattice(Lattice::B).iter().all(|a| a.norm() == 0.0));
        assert_eq!(s.atom_population(), 0.0);
    }

    #[test]
    fn packet_spectrum_peaks_at_carrier() {
        // brute-force DFT of the a-lattice amplitudes over the grid
        let grid = LatticeGrid::default();
        let s = gaussian_packet(&grid, ModelKind::Effective, &PacketSpec::default()).unwrap();
        let n = grid.n_sites();
        let amps = s.lattice(Lattice::A);
        let (mut best_k, mut best_p) = (0.0, 0.0);
        for q in 0..n {
            let k = 2.0 * PI * q as f64 / n as f64 - PI;
            let f: Complex64 = amps
                .iter()
                .enumerate()
                .map(|(i, a)| a * Complex64::from_polar(1.0, -k * grid.site_label(i) as f64))
                .sum();
            if f.norm_sqr() > best_p {
                best_p = f.norm_sqr();
                best_k = k;
            }
        }
        assert!((best_k - PI / 2.0).abs() <= 2.0 * PI / n as f64 + 1e-12);
    }

    #[test]
    fn clipped_support_is_refused() {
        let grid = LatticeGrid::default();
        let spec = PacketSpec { m0: -185, ..Default::default() };
        assert!(matches!(gaussian_packet(&grid, ModelKind::Effective, &spec), Err(DynamicsError::Configuration(_))));
        // exactly 5σ to the wall is allowed
        let spec = PacketSpec { m0: -100, ..Default::default() };
        assert!(gaussian_packet(&grid, ModelKind::Effective, &spec).is_ok());
    }

    #[test]
    fn invalid_wavevector_is_refused() {
        let grid = LatticeGrid::default();
        for k in [0.0, PI, -PI, 4.0, f64::NAN] {
            let spec = PacketSpec { k_f: k, ..Default::default() };
            assert!(gaussian_packet(&grid, ModelKind::Full, &spec).is_err());
        }
        let spec = PacketSpec { sigma: 0.0, ..Default::default() };
        assert!(gaussian_packet(&grid, ModelKind::Full, &spec).is_err());
    }

    #[test]
    fn catch_state_symmetric_about_center() {
        let grid = LatticeGrid::default();
        let s = catch_initial_state(&grid, ModelKind::Effective, 30, &CatchSpec::default()).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        let p = s.probabilities(Lattice::A);
        for d in 0..60 {
            let l = grid.site_index(15 - d).unwrap();
            let r = grid.site_index(15 + d).unwrap();
            assert!((p[l] - p[r]).abs() < 1e-15);
        }
        // odd-parity standing wave around the odd centre
        assert!(p[grid.site_index(15).unwrap()] > 0.0);
        assert!(p[grid.site_index(14).unwrap()] < 1e-30);
    }

    #[test]
    fn catch_state_carries_no_current() {
        // ⟨sin k⟩ ∝ Σ Im(x_m* x_{m+1})
        let grid = LatticeGrid::default();
        for origin in [PhaseOrigin::Center, PhaseOrigin::Lattice] {
            let spec = CatchSpec { phase_origin: origin, ..Default::default() };
            let s = catch_initial_state(&grid, ModelKind::Effective, 30, &spec).unwrap();
            let a = s.lattice(Lattice::A);
            let current: f64 = a.windows(2).map(|w| (w[0].conj() * w[1]).im).sum();
            assert!(current.abs() < 1e-14);
        }
    }

    #[test]
    fn lattice_origin_uses_even_sites() {
        let grid = LatticeGrid::default();
        let spec = CatchSpec { phase_origin: PhaseOrigin::Lattice, ..Default::default() };
        let s = catch_initial_state(&grid, ModelKind::Effective, 30, &spec).unwrap();
        let p = s.probabilities(Lattice::A);
        assert!(p[grid.site_index(15).unwrap()] < 1e-30);
        assert!(p[grid.site_index(14).unwrap()] > 0.0);
    }

    #[test]
    fn odd_separation_rounds_center_down() {
        assert_eq!(CatchSpec::center(31), 15);
        assert_eq!(CatchSpec::center(30), 15);
    }

    #[test]
    fn default_stop_time() {
        let spec = PacketSpec::default();
        assert_eq!(spec.default_t_end(3, 1.0), 92.0);
        assert_eq!(spec.default_t_end(1, 1.0), 91.0);
    }
}
