use num_complex::Complex64;

use super::{EffectiveParams, FullModelParams, LatticeGrid, ModelError, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorParams {
    Full(FullModelParams),
    Effective(EffectiveParams),
}

impl GeneratorParams {
    pub fn n_sep(&self) -> usize {
        match self {
            Self::Full(p) => p.n_sep,
            Self::Effective(p) => p.n_sep,
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            Self::Full(p) => p.theta,
            Self::Effective(p) => p.theta,
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Self::Full(_) => ModelKind::Full,
            Self::Effective(_) => ModelKind::Effective,
        }
    }
}

/// Right-hand side `dx/dt = −i H x` of the single-excitation equations of
/// motion on a hard-walled grid.
///
/// Application is O(dim): nearest-neighbour hopping plus a fixed number of
/// atom couplings. The drive phase is the only mutable piece.
#[derive(Debug, Clone)]
pub struct Generator {
    grid: LatticeGrid,
    params: GeneratorParams,
    theta: f64,
    /// `e^{iθ}`
    phase: Complex64,
    i0: usize,
    i_n: usize,
}

impl Generator {
    pub fn kind(&self) -> ModelKind {
        self.params.kind()
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn params(&self) -> &GeneratorParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.grid.dim(self.kind())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn set_theta(&mut self, theta: f64) {
        self.theta = theta;
        self.phase = Complex64::from_polar(1.0, theta);
    }

    pub fn n_sep(&self) -> usize {
        self.params.n_sep()
    }

    pub fn is_lossless(&self) -> bool {
        match &self.params {
            GeneratorParams::Full(p) => p.is_lossless(),
            GeneratorParams::Effective(p) => p.gamma_e == 0.0,
        }
    }

    /// Gershgorin bound on the spectral radius of `H`.
    pub fn spectral_bound(&self) -> f64 {
        match &self.params {
            GeneratorParams::Full(p) => {
                let lattice = 2.0 * p.j + p.g0.abs().max(p.g_n.abs());
                let e = p.delta_e.abs() + p.gamma_e + 2.0 * p.g_n.abs() + p.eta.abs();
                let f = p.delta_f.abs() + p.gamma_f + 2.0 * p.g0.abs() + p.eta.abs();
                lattice.max(e).max(f)
            }
            GeneratorParams::Effective(p) => {
                let d0 = if p.include_delta0 { 2.0 * p.delta0_prime.abs() } else { 0.0 };
                let lattice = 2.0 * p.j + p.g0_prime.abs().max(p.g_n.abs()) + d0;
                let e = p.atom_detuning().abs() + p.gamma_e + 2.0 * (p.g0_prime.abs() + p.g_n.abs());
                lattice.max(e)
            }
        }
    }

    /// Writes `dx/dt` for state vector `x` into `out`.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.grid.n_sites();
        assert_eq!(x.len(), self.dim(), "state dimension does not match the generator");
        assert_eq!(out.len(), x.len());

        // Accumulate H x, multiply by -i at the end.
        let (ua, rest) = x.split_at(n);
        let (vb, atom) = rest.split_at(n);
        let (out_a, rest_out) = out.split_at_mut(n);
        let (out_b, out_atom) = rest_out.split_at_mut(n);
        let j = match &self.params {
            GeneratorParams::Full(p) => p.j,
            GeneratorParams::Effective(p) => p.j,
        };
        hop(j, ua, out_a);
        hop(j, vb, out_b);

        let (i0, i_n) = (self.i0, self.i_n);
        let site0 = ua[i0] + vb[i0];
        let site_n = ua[i_n] + vb[i_n];
        match &self.params {
            GeneratorParams::Full(p) => {
                let (we, wf) = (atom[0], atom[1]);
                // The |e> row couples to w_f, not to a lattice amplitude: the
                // rotating-frame Hamiltonian has η e^{iθ}|e><f|.
                out_atom[0] = Complex64::new(-p.delta_e, -p.gamma_e) * we + p.g_n * site_n + p.eta * self.phase * wf;
                out_atom[1] =
                    Complex64::new(-p.delta_f, -p.gamma_f) * wf + p.g0 * site0 + p.eta * self.phase.conj() * we;
                let to_n = p.g_n * we;
                let to_0 = p.g0 * wf;
                out_a[i_n] += to_n;
                out_b[i_n] += to_n;
                out_a[i0] += to_0;
                out_b[i0] += to_0;
            }
            GeneratorParams::Effective(p) => {
                let we = atom[0];
                out_atom[0] = Complex64::new(p.atom_detuning(), -p.gamma_e) * we
                    + p.g0_prime * self.phase * site0
                    + p.g_n * site_n;
                let to_n = p.g_n * we;
                let mut to_0 = p.g0_prime * self.phase.conj() * we;
                if p.include_delta0 {
                    to_0 += p.delta0_prime * site0;
                }
                out_a[i_n] += to_n;
                out_b[i_n] += to_n;
                out_a[i0] += to_0;
                out_b[i0] += to_0;
            }
        }

        for o in out.iter_mut() {
            *o = Complex64::new(o.im, -o.re);
        }
    }

    pub fn apply_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        self.apply(x, &mut out);
        out
    }
}

/// `out_m = −J (x_{m+1} + x_{m−1})` with hard walls.
fn hop(j: f64, x: &[Complex64], out: &mut [Complex64]) {
    let n = x.len();
    match n {
        0 => {}
        1 => out[0] = Complex64::new(0.0, 0.0),
        _ => {
            out[0] = -j * x[1];
            for m in 1..n - 1 {
                out[m] = -j * (x[m + 1] + x[m - 1]);
            }
            out[n - 1] = -j * x[n - 2];
        }
    }
}

fn coupling_indices(grid: &LatticeGrid, n_sep: usize) -> Result<(usize, usize), ModelError> {
    grid.check_coupling_sites(n_sep)?;
    let i0 = grid.site_index(0).expect("checked");
    let i_n = grid.site_index(n_sep as i64).expect("checked");
    Ok((i0, i_n))
}

/// Generator of the driven three-level model (atom levels `|e⟩`, `|f⟩`).
pub fn build_full_generator(params: &FullModelParams, grid: &LatticeGrid) -> Result<Generator, ModelError> {
    params.validate()?;
    let (i0, i_n) = coupling_indices(grid, params.n_sep)?;
    let mut gen = Generator {
        grid: *grid,
        params: GeneratorParams::Full(*params),
        theta: 0.0,
        phase: Complex64::new(1.0, 0.0),
        i0,
        i_n,
    };
    gen.set_theta(params.theta);
    Ok(gen)
}

/// Generator of the two-level giant atom after eliminating `|f⟩`.
pub fn build_effective_generator(params: &EffectiveParams, grid: &LatticeGrid) -> Result<Generator, ModelError> {
    params.validate()?;
    let (i0, i_n) = coupling_indices(grid, params.n_sep)?;
    let mut gen = Generator {
        grid: *grid,
        params: GeneratorParams::Effective(*params),
        theta: 0.0,
        phase: Complex64::new(1.0, 0.0),
        i0,
        i_n,
    };
    gen.set_theta(params.theta);
    Ok(gen)
}

pub fn build_generator(params: &GeneratorParams, grid: &LatticeGrid) -> Result<Generator, ModelError> {
    match params {
        GeneratorParams::Full(p) => build_full_generator(p, grid),
        GeneratorParams::Effective(p) => build_effective_generator(p, grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_effective_params, Lattice, SingleExcitationState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
        x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
    }

    fn norm(x: &[Complex64]) -> f64 {
        inner(x, x).re.sqrt()
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    fn random_full(rng: &mut ChaCha8Rng) -> FullModelParams {
        FullModelParams {
            j: rng.gen_range(0.2..2.0),
            g0: rng.gen_range(0.0..6.0),
            g_n: rng.gen_range(0.0..2.0),
            eta: rng.gen_range(0.0..30.0),
            theta: rng.gen_range(-PI..PI),
            delta_e: rng.gen_range(-5.0..5.0),
            delta_f: rng.gen_range(-150.0..150.0),
            gamma_e: 0.0,
            gamma_f: 0.0,
            n_sep: rng.gen_range(1..12),
            frequencies: None,
        }
    }

    fn random_effective(rng: &mut ChaCha8Rng) -> EffectiveParams {
        EffectiveParams {
            j: rng.gen_range(0.2..2.0),
            g0_prime: rng.gen_range(0.0..2.0),
            g_n: rng.gen_range(0.0..2.0),
            delta0_prime: rng.gen_range(0.0..0.5),
            delta_e_prime: rng.gen_range(-4.0..4.0),
            delta_e: rng.gen_range(-4.0..4.0),
            theta: rng.gen_range(-PI..PI),
            gamma_e: 0.0,
            n_sep: rng.gen_range(1..12),
            include_delta0: rng.gen_bool(0.5),
        }
    }

    fn assert_anti_hermitian(gen: &Generator, rng: &mut ChaCha8Rng) {
        let x = random_vec(rng, gen.dim());
        let y = random_vec(rng, gen.dim());
        let lhs = inner(&x, &gen.apply_vec(&y)) + inner(&gen.apply_vec(&x), &y);
        assert!(lhs.norm() < 1e-12 * norm(&x) * norm(&y), "skew defect {}", lhs.norm());
    }

    #[test]
    fn lossless_generators_are_anti_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grid = LatticeGrid::new(64, 30).unwrap();
        for _ in 0..100 {
            let full = build_full_generator(&random_full(&mut rng), &grid).unwrap();
            assert_anti_hermitian(&full, &mut rng);
            let eff = build_effective_generator(&random_effective(&mut rng), &grid).unwrap();
            assert_anti_hermitian(&eff, &mut rng);
        }
    }

    #[test]
    fn norm_derivative_vanishes_without_loss() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = LatticeGrid::default();
        let gen = build_full_generator(&FullModelParams::reference(3, 0.4), &grid).unwrap();
        let x = random_vec(&mut rng, gen.dim());
        // d‖x‖²/dt = 2 Re⟨x, ẋ⟩
        let rate = 2.0 * inner(&x, &gen.apply_vec(&x)).re;
        assert!(rate.abs() < 1e-12 * norm(&x).powi(2) * gen.spectral_bound());
    }

    #[test]
    fn free_lattice_reproduces_cosine_band() {
        let mut p = FullModelParams::reference(2, 0.0);
        p.g0 = 0.0;
        p.g_n = 0.0;
        p.eta = 0.0;
        p.j = 1.3;
        let grid = LatticeGrid::new(50, 25).unwrap();
        let gen = build_full_generator(&p, &grid).unwrap();
        for k in [0.3, 1.0, PI / 2.0, 2.5] {
            let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Full);
            for (i, a) in s.lattice_mut(Lattice::B).iter_mut().enumerate() {
                *a = Complex64::from_polar(1.0, k * grid.site_label(i) as f64);
            }
            let d = gen.apply_vec(&s.amplitudes);
            // −iHψ = −iEψ with E = −2J cos k on interior sites
            let e = -2.0 * p.j * k.cos();
            for i in 1..49 {
                let idx = 50 + i;
                let expect = c(0.0, -e) * s.amplitudes[idx];
                assert!((d[idx] - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn pure_decay_of_excited_level() {
        let mut p = FullModelParams::reference(1, 0.0);
        p.gamma_e = 0.3;
        let grid = LatticeGrid::new(20, 10).unwrap();
        let gen = build_full_generator(&p, &grid).unwrap();
        let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Full);
        s.amplitudes[40] = c(0.6, 0.8);
        let d = gen.apply_vec(&s.amplitudes);
        let rate = 2.0 * (s.amplitudes[40].conj() * d[40]).re;
        assert!((rate + 2.0 * 0.3).abs() < 1e-14);
    }

    #[test]
    fn offset_lamb_shift_leaves_no_real_atom_diagonal() {
        let d = derive_effective_params(&FullModelParams::reference(3, 0.0), &Default::default()).unwrap();
        let grid = LatticeGrid::default();
        let gen = build_effective_generator(&d.params, &grid).unwrap();
        let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Effective);
        s.amplitudes[800] = c(1.0, 0.0);
        let out = gen.apply_vec(&s.amplitudes);
        assert_eq!(out[800], c(0.0, 0.0));
    }

    #[test]
    fn effective_phase_convention() {
        // atom row carries e^{iθ} on site 0, site-0 rows carry e^{-iθ} on w_e
        let theta = 0.7;
        let p = EffectiveParams::equal_coupling(0.5, 2, theta);
        let grid = LatticeGrid::new(10, 4).unwrap();
        let gen = build_effective_generator(&p, &grid).unwrap();
        let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Effective);
        s.amplitudes[4] = c(1.0, 0.0);
        let out = gen.apply_vec(&s.amplitudes);
        let expect = c(0.0, -1.0) * 0.5 * Complex64::from_polar(1.0, theta);
        assert!((out[20] - expect).norm() < 1e-15);

        let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Effective);
        s.amplitudes[20] = c(1.0, 0.0);
        let out = gen.apply_vec(&s.amplitudes);
        let expect = c(0.0, -1.0) * 0.5 * Complex64::from_polar(1.0, -theta);
        assert!((out[4] - expect).norm() < 1e-15);
        assert!((out[14] - expect).norm() < 1e-15);
        assert!((out[6] - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn delta0_terms_follow_flag() {
        let mut p = EffectiveParams::equal_coupling(0.0, 2, 0.0);
        p.delta0_prime = 0.16;
        let grid = LatticeGrid::new(10, 4).unwrap();
        let mut s = SingleExcitationState::vacuum(&grid, ModelKind::Effective);
        s.amplitudes[4] = c(1.0, 0.0);
        let off = build_effective_generator(&p, &grid).unwrap().apply_vec(&s.amplitudes);
        assert_eq!(off[4], c(0.0, 0.0));
        assert_eq!(off[14], c(0.0, 0.0));
        p.include_delta0 = true;
        let on = build_effective_generator(&p, &grid).unwrap().apply_vec(&s.amplitudes);
        assert!((on[4] - c(0.0, -0.16)).norm() < 1e-16);
        assert!((on[14] - c(0.0, -0.16)).norm() < 1e-16);
    }

    #[test]
    fn coupling_site_outside_grid_is_a_configuration_error() {
        let grid = LatticeGrid::new(10, 4).unwrap();
        let err = build_effective_generator(&EffectiveParams::equal_coupling(0.7, 5, 0.0), &grid).unwrap_err();
        assert!(matches!(err, ModelError::Configuration(_)));
    }

    #[test]
    fn lattice_swap_commutes_with_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grid = LatticeGrid::new(40, 18).unwrap();
        for gen in [
            build_full_generator(&random_full(&mut rng), &grid).unwrap(),
            build_effective_generator(&random_effective(&mut rng), &grid).unwrap(),
        ] {
            let mut s = SingleExcitationState::vacuum(&grid, gen.kind());
            s.amplitudes = random_vec(&mut rng, gen.dim());
            let mut swapped = s.clone();
            swapped.swap_lattices();
            let mut lhs = s.clone();
            lhs.amplitudes = gen.apply_vec(&s.amplitudes);
            lhs.swap_lattices();
            let rhs = gen.apply_vec(&swapped.amplitudes);
            for (a, b) in lhs.amplitudes.iter().zip(&rhs) {
                assert!((a - b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn apply_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let grid = LatticeGrid::new(40, 18).unwrap();
        let gen = build_full_generator(&random_full(&mut rng), &grid).unwrap();
        let x = random_vec(&mut rng, gen.dim());
        let y = random_vec(&mut rng, gen.dim());
        let (alpha, beta) = (c(0.3, -1.2), c(-0.7, 0.4));
        let combo: Vec<_> = x.iter().zip(&y).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = gen.apply_vec(&combo);
        let (ax, ay) = (gen.apply_vec(&x), gen.apply_vec(&y));
        let scale = gen.spectral_bound() * (norm(&x) + norm(&y));
        for i in 0..lhs.len() {
            assert!((lhs[i] - (alpha * ax[i] + beta * ay[i])).norm() < 1e-12 * scale);
        }
    }
}
