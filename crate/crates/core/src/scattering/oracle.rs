use num_complex::Complex64;

use super::linalg::solve;
use super::{ScatteringAmplitudes, ScatteringError, ScatteringInput};

const PIVOT_TOL: f64 = 1e-13;

fn e(k: f64, m: f64) -> Complex64 {
    Complex64::from_polar(1.0, k * m)
}

/// Continuity rows 0–3 in the unknowns `(r_a, l_al, l_ar, t_a, r_b, l_bl, l_br, t_b, …)`.
fn continuity<const N: usize>(a: &mut [[Complex64; N]; N], b: &mut [Complex64; N], k: f64, n: f64) {
    let one = Complex64::new(1.0, 0.0);
    a[0][0] = one;
    a[0][1] = -one;
    a[0][2] = -one;
    b[0] = -one;
    a[1][4] = one;
    a[1][5] = -one;
    a[1][6] = -one;
    a[2][3] = e(k, n);
    a[2][1] = -e(k, -n);
    a[2][2] = -e(k, n);
    a[3][7] = e(k, n);
    a[3][5] = -e(k, -n);
    a[3][6] = -e(k, n);
}

/// Brute-force amplitudes from the 8×8 linear system: four continuity
/// relations plus the lattice equations at sites 0 and N with the atom
/// eliminated.
///
/// The eliminated rows are multiplied through by `E_f`, so the system
/// degenerates at `k = π/2` where `E_f = 0`; there it reports a singular
/// point. [`jump_oracle_amplitudes`] covers that case.
pub fn oracle_amplitudes(input: &ScatteringInput) -> Result<ScatteringAmplitudes, ScatteringError> {
    input.validate()?;
    if input.g == 0.0 {
        return super::closed_form_amplitudes(input);
    }
    let (j, g, k, n) = (input.j, input.g, input.k_f, input.n_sep as f64);
    let zero = Complex64::new(0.0, 0.0);
    let mut a = [[zero; 8]; 8];
    let mut b = [zero; 8];
    continuity(&mut a, &mut b, k, n);

    let c2 = Complex64::new(4.0 * j * j * k.cos().powi(2) - g * g, 0.0);
    let h = 2.0 * j * j * k.cos();
    let g2 = g * g;
    let em = Complex64::from_polar(1.0, -input.theta);
    let ep = em.conj();

    // site 0, lattice a
    a[4][1] += c2 - h * e(k, -1.0);
    a[4][2] += c2 - h * e(k, 1.0);
    a[4][0] += -h * e(k, 1.0);
    a[4][4] += -g2;
    a[4][3] += -g2 * em * e(k, n);
    a[4][7] += -g2 * em * e(k, n);
    b[4] = h * e(k, -1.0);
    // site 0, lattice b
    a[5][4] += c2 - h * e(k, 1.0);
    a[5][5] += -h * e(k, -1.0);
    a[5][6] += -h * e(k, 1.0);
    a[5][1] += -g2;
    a[5][2] += -g2;
    a[5][3] += -g2 * em * e(k, n);
    a[5][7] += -g2 * em * e(k, n);
    // site N, lattice a
    a[6][1] += h * e(k, -(n - 1.0)) + ep * g2;
    a[6][2] += h * e(k, n - 1.0) + ep * g2;
    a[6][3] += h * e(k, n + 1.0) - c2 * e(k, n);
    a[6][4] += ep * g2;
    a[6][7] += g2 * e(k, n);
    // site N, lattice b
    a[7][5] += h * e(k, -(n - 1.0));
    a[7][6] += h * e(k, n - 1.0);
    a[7][7] += h * e(k, n + 1.0) - c2 * e(k, n);
    a[7][1] += ep * g2;
    a[7][2] += ep * g2;
    a[7][4] += ep * g2;
    a[7][3] += g2 * e(k, n);

    let x = solve(a, b, PIVOT_TOL).ok_or_else(|| input.singular("oracle linear system is singular"))?;
    Ok(ScatteringAmplitudes::from_array(x, input.xi()))
}

/// Amplitudes from a 9×9 system that keeps the atom amplitude as an unknown:
/// continuity, the jump of the hopping term at sites 0 and N on both
/// lattices, and the atom equation. Regular at `k = π/2`.
pub fn jump_oracle_amplitudes(input: &ScatteringInput) -> Result<ScatteringAmplitudes, ScatteringError> {
    input.validate()?;
    if input.g == 0.0 {
        return super::closed_form_amplitudes(input);
    }
    let (j, g, k, n) = (input.j, input.g, input.k_f, input.n_sep as f64);
    let zero = Complex64::new(0.0, 0.0);
    let mut a = [[zero; 9]; 9];
    let mut b = [zero; 9];
    continuity(&mut a, &mut b, k, n);
    let em = Complex64::from_polar(1.0, -input.theta);

    // J[outer(−1) − inner(−1)] = g e^{−iθ} w
    a[4][0] = j * e(k, 1.0);
    a[4][1] = -j * e(k, 1.0);
    a[4][2] = -j * e(k, -1.0);
    a[4][8] = -g * em;
    b[4] = -j * e(k, -1.0);
    a[5][4] = j * e(k, 1.0);
    a[5][5] = -j * e(k, 1.0);
    a[5][6] = -j * e(k, -1.0);
    a[5][8] = -g * em;
    // J[outer(N+1) − inner(N+1)] = g w
    a[6][3] = j * e(k, n + 1.0);
    a[6][1] = -j * e(k, -(n + 1.0));
    a[6][2] = -j * e(k, n + 1.0);
    a[6][8] = Complex64::new(-g, 0.0);
    a[7][7] = j * e(k, n + 1.0);
    a[7][5] = -j * e(k, -(n + 1.0));
    a[7][6] = -j * e(k, n + 1.0);
    a[7][8] = Complex64::new(-g, 0.0);
    // E w = g e^{iθ}(u_0 + v_0) + g(u_N + v_N)
    a[8][8] = Complex64::new(input.energy(), 0.0);
    for col in [1, 2, 5, 6] {
        a[8][col] = -g * em.conj();
    }
    a[8][3] = -g * e(k, n);
    a[8][7] = -g * e(k, n);

    let x = solve(a, b, PIVOT_TOL).ok_or_else(|| input.singular("jump system is singular"))?;
    let mut amps = [zero; 8];
    amps.copy_from_slice(&x[..8]);
    Ok(ScatteringAmplitudes::from_array(amps, input.xi()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::closed_form_amplitudes;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn draw(rng: &mut ChaCha8Rng) -> ScatteringInput {
        ScatteringInput::new(
            rng.gen_range(0.1..2.0),
            rng.gen_range(0.1..PI - 0.1),
            rng.gen_range(1..=10),
            rng.gen_range(-PI..PI),
        )
    }

    fn continuity_error(a: &ScatteringAmplitudes, input: &ScatteringInput) -> f64 {
        let ekn = Complex64::from_polar(1.0, input.k_f * input.n_sep as f64);
        [
            1.0 + a.r_a - a.l_al - a.l_ar,
            a.r_b - a.l_bl - a.l_br,
            a.t_a * ekn - a.l_al * ekn.conj() - a.l_ar * ekn,
            a.t_b * ekn - a.l_bl * ekn.conj() - a.l_br * ekn,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }

    #[test]
    fn oracle_satisfies_continuity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let input = draw(&mut rng);
            let a = oracle_amplitudes(&input).unwrap();
            assert!(continuity_error(&a, &input) < 1e-12);
        }
    }

    #[test]
    fn oracle_reconstruction_solves_stationary_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let input = draw(&mut rng);
            let a = oracle_amplitudes(&input).unwrap();
            let n = input.n_sep as i64;
            let res = a.stationary_residual(&input, -5, n + 5);
            assert!(res < 1e-10, "{input:?}: residual {res}");
        }
    }

    #[test]
    fn oracle_conserves_flux() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let input = draw(&mut rng);
            let f = oracle_amplitudes(&input).unwrap().flux();
            assert!((f - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn oracles_agree_with_general_hopping() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..500 {
            let mut input = draw(&mut rng);
            input.j = rng.gen_range(0.3..3.0);
            let b = oracle_amplitudes(&input).unwrap();
            let jmp = jump_oracle_amplitudes(&input).unwrap();
            let cf = closed_form_amplitudes(&input).unwrap();
            assert!(b.max_abs_diff(&jmp) < 1e-9, "{input:?}");
            assert!(cf.max_abs_diff(&jmp) < 1e-10, "{input:?}");
        }
    }

    #[test]
    fn elimination_form_degenerates_at_band_centre() {
        let input = ScatteringInput::new(0.7, FRAC_PI_2, 3, -FRAC_PI_2);
        assert!(matches!(oracle_amplitudes(&input), Err(ScatteringError::Singular { .. })));
        let a = jump_oracle_amplitudes(&input).unwrap();
        assert!((a.t_b + 1.0).norm() < 1e-13);
        assert!(a.t_a.norm() < 1e-13);
    }

    proptest! {
        #[test]
        fn closed_form_matches_jump_oracle(
            g in 0.1f64..2.0, k in 0.1f64..(PI - 0.1), n in 1usize..=12, theta in -PI..PI,
        ) {
            let input = ScatteringInput::new(g, k, n, theta);
            let cf = closed_form_amplitudes(&input).unwrap();
            let jmp = jump_oracle_amplitudes(&input).unwrap();
            prop_assert!(cf.max_abs_diff(&jmp) < 1e-10);
            prop_assert!(cf.stationary_residual(&input, -5, n as i64 + 5) < 1e-10);
        }

        #[test]
        fn reflections_are_equal(g in 0.1f64..2.0, k in 0.1f64..(PI - 0.1), n in 0usize..=12, theta in -PI..PI) {
            let a = closed_form_amplitudes(&ScatteringInput::new(g, k, n, theta)).unwrap();
            prop_assert_eq!(a.r_a, a.r_b);
        }

        #[test]
        fn theta_periodicity(g in 0.1f64..2.0, k in 0.1f64..(PI - 0.1), n in 1usize..=12, theta in -PI..PI) {
            let a = closed_form_amplitudes(&ScatteringInput::new(g, k, n, theta)).unwrap();
            let b = closed_form_amplitudes(&ScatteringInput::new(g, k, n, theta + 2.0 * PI)).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
        }

        #[test]
        fn flux_is_conserved(g in 0.05f64..3.0, k in 0.05f64..(PI - 0.05), n in 1usize..=40, theta in -PI..PI) {
            let a = closed_form_amplitudes(&ScatteringInput::new(g, k, n, theta)).unwrap();
            prop_assert!((a.flux() - 1.0).abs() < 1e-10);
        }
    }
}
