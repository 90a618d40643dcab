use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AtomLevel, Lattice, LatticeGrid, ModelKind};

/// Single-excitation amplitudes `{u_m, v_m, w_e, w_f}` in the flat layout of
/// [`LatticeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleExcitationState {
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
    kind: ModelKind,
    n_sites: usize,
}

impl SingleExcitationState {
    pub fn vacuum(grid: &LatticeGrid, kind: ModelKind) -> Self {
        Self { amplitudes: vec![Complex64::new(0.0, 0.0); grid.dim(kind)], time: 0.0, kind, n_sites: grid.n_sites() }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn lattice(&self, lattice: Lattice) -> &[Complex64] {
        let n = self.n_sites;
        match lattice {
            Lattice::A => &self.amplitudes[..n],
            Lattice::B => &self.amplitudes[n..2 * n],
        }
    }

    pub fn lattice_mut(&mut self, lattice: Lattice) -> &mut [Complex64] {
        let n = self.n_sites;
        match lattice {
            Lattice::A => &mut self.amplitudes[..n],
            Lattice::B => &mut self.amplitudes[n..2 * n],
        }
    }

    pub fn atom(&self, level: AtomLevel) -> Complex64 {
        match (level, self.kind) {
            (AtomLevel::E, _) => self.amplitudes[2 * self.n_sites],
            (AtomLevel::F, ModelKind::Full) => self.amplitudes[2 * self.n_sites + 1],
            (AtomLevel::F, ModelKind::Effective) => Complex64::new(0.0, 0.0),
        }
    }

    /// `|w_e|² + |w_f|²`.
    pub fn atom_population(&self) -> f64 {
        self.amplitudes[2 * self.n_sites..].iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm; returns the norm before rescaling.
    pub fn normalize(&mut self) -> f64 {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        }
        norm
    }

    /// Site probabilities `|x_m|²` of one lattice in array order.
    pub fn probabilities(&self, lattice: Lattice) -> Vec<f64> {
        self.lattice(lattice).iter().map(|a| a.norm_sqr()).collect()
    }

    /// Exchanges the `a` and `b` lattice amplitudes.
    pub fn swap_lattices(&mut self) {
        let n = self.n_sites;
        let (a, rest) = self.amplitudes.split_at_mut(n);
        a.swap_with_slice(&mut rest[..n]);
    }
}
