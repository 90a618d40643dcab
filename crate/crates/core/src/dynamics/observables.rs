use serde::{Deserialize, Serialize};

use crate::model::{Lattice, LatticeGrid, SingleExcitationState};

/// Partition of the final probability by region.
///
/// `T` counts sites `m ≥ N`, `R` sites `m < 0`, `mid` sites `0 ≤ m < N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoutingResult {
    #[serde(rename = "T_a")]
    pub t_a: f64,
    #[serde(rename = "T_b")]
    pub t_b: f64,
    #[serde(rename = "R_a")]
    pub r_a: f64,
    #[serde(rename = "R_b")]
    pub r_b: f64,
    pub mid_a: f64,
    pub mid_b: f64,
    pub atom_residual: f64,
    pub t_final: f64,
}

impl RoutingResult {
    pub fn total(&self) -> f64 {
        self.t_a + self.t_b + self.r_a + self.r_b + self.mid_a + self.mid_b + self.atom_residual
    }
}

fn partition(probs: &[f64], grid: &LatticeGrid, n: i64) -> (f64, f64, f64) {
    let (mut reflected, mut mid, mut transmitted) = (0.0, 0.0, 0.0);
    for (i, p) in probs.iter().enumerate() {
        let m = grid.site_label(i);
        if m < 0 {
            reflected += p;
        } else if m < n {
            mid += p;
        } else {
            transmitted += p;
        }
    }
    (reflected, mid, transmitted)
}

pub fn routing_coefficients(state: &SingleExcitationState, grid: &LatticeGrid, n_sep: usize) -> RoutingResult {
    let n = n_sep as i64;
    let (r_a, mid_a, t_a) = partition(&state.probabilities(Lattice::A), grid, n);
    let (r_b, mid_b, t_b) = partition(&state.probabilities(Lattice::B), grid, n);
    RoutingResult { t_a, t_b, r_a, r_b, mid_a, mid_b, atom_residual: state.atom_population(), t_final: state.time }
}

/// Photon weight inside the coupling window `0 ≤ m ≤ N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatchProbability {
    pub a: f64,
    pub b: f64,
}

impl CatchProbability {
    pub fn total(&self) -> f64 {
        self.a + self.b
    }
}

pub fn window_weight(probs: &[f64], grid: &LatticeGrid, n_sep: usize) -> f64 {
    (0..=n_sep as i64).filter_map(|m| grid.site_index(m)).map(|i| probs[i]).sum()
}

pub fn catch_probability(state: &SingleExcitationState, grid: &LatticeGrid, n_sep: usize) -> CatchProbability {
    CatchProbability {
        a: window_weight(&state.probabilities(Lattice::A), grid, n_sep),
        b: window_weight(&state.probabilities(Lattice::B), grid, n_sep),
    }
}

/// Probability-weighted mean site label of one lattice.
pub fn mean_position(probs: &[f64], grid: &LatticeGrid) -> f64 {
    let total: f64 = probs.iter().sum();
    probs.iter().enumerate().map(|(i, p)| p * grid.site_label(i) as f64).sum::<f64>() / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelKind;
    use num_complex::Complex64;

    #[test]
    fn transmitted_weight_on_a() {
        let grid = LatticeGrid::default();
        let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Effective);
        s.amplitudes[grid.index(Lattice::A, 10).unwrap()] = Complex64::new(0.6, 0.0);
        s.amplitudes[grid.index(Lattice::A, 11).unwrap()] = Complex64::new(0.0, 0.8);
        let r = routing_coefficients(&s, &grid, 3);
        assert!((r.t_a - 1.0).abs() < 1e-15);
        assert_eq!((r.t_b, r.r_a, r.r_b, r.mid_a, r.mid_b, r.atom_residual), (0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn uniform_state_splits_by_site_count() {
        let grid = LatticeGrid::new(40, 12).unwrap();
        let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Full);
        let a = Complex64::new((1.0f64 / 82.0).sqrt(), 0.0);
        s.amplitudes.iter_mut().for_each(|x| *x = a);
        let r = routing_coefficients(&s, &grid, 5);
        let p = 1.0 / 82.0;
        assert!((r.r_a - 12.0 * p).abs() < 1e-14);
        assert!((r.mid_b - 5.0 * p).abs() < 1e-14);
        assert!((r.t_a - 23.0 * p).abs() < 1e-14);
        assert!((r.atom_residual - 2.0 * p).abs() < 1e-14);
        assert!((r.total() - s.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn full_window_weight() {
        let grid = LatticeGrid::default();
        let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Effective);
        for m in 0..=30 {
            s.amplitudes[grid.index(Lattice::A, m).unwrap()] = Complex64::new((1.0f64 / 31.0).sqrt(), 0.0);
        }
        let pc = catch_probability(&s, &grid, 30);
        assert!((pc.a - 1.0).abs() < 1e-14);
        assert_eq!(pc.b, 0.0);
    }
}
