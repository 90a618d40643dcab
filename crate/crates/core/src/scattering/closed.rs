use num_complex::Complex64;

use super::{ScatteringAmplitudes, ScatteringError, ScatteringInput, SINGULAR_DENOMINATOR};

/// Closed-form stationary amplitudes.
///
/// All eight share the denominator `D = 2[cos(kN) cos θ + 1] + iξ`. Inside the
/// coupling window the left-moving parts on both lattices coincide,
/// `l_bl = l_al`, so that `u_m − v_m = e^{ikm}` everywhere.
pub fn closed_form_amplitudes(input: &ScatteringInput) -> Result<ScatteringAmplitudes, ScatteringError> {
    input.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if input.g == 0.0 {
        return Ok(ScatteringAmplitudes::from_array([zero, zero, one, one, zero, zero, zero, zero], f64::INFINITY));
    }
    let kn = input.k_f * input.n_sep as f64;
    let (c, ct) = (kn.cos(), input.theta.cos());
    let xi = input.xi();
    let d = Complex64::new(2.0 * (c * ct + 1.0), xi);
    if !(d.norm() >= SINGULAR_DENOMINATOR) {
        return Err(input.singular(format!(
            "denominator D = {d} vanishes (cos(kN) cos(theta) = -1 with xi = 0): atom-photon bound state"
        )));
    }
    let ekn = Complex64::from_polar(1.0, kn);
    let eth = Complex64::from_polar(1.0, input.theta);
    let e_diff = Complex64::from_polar(1.0, kn - input.theta);
    let ixi = Complex64::new(0.0, xi);

    let r = -ekn * (c + ct) / d;
    let l_left = -0.5 * ekn * (eth + ekn) / d;
    let l_ar = (2.0 * c * ct + 0.5 * (3.0 - e_diff) + ixi) / d;
    let t_a = (1.0 + (kn + input.theta).cos() + ixi) / d;
    let l_br = -0.5 * (1.0 + e_diff) / d;
    let t_b = Complex64::new(-(1.0 + (kn - input.theta).cos()), 0.0) / d;
    Ok(ScatteringAmplitudes::from_array([r, l_left, l_ar, t_a, r, l_left, l_br, t_b], xi))
}

/// Photon incident from the right on lattice a.
///
/// Mirroring `m → N − m` and regauging the atom maps this to left incidence
/// with `θ → −θ`. Amplitudes refer to the mirrored frame; the coefficients
/// `|·|²` are frame independent.
pub fn from_right(input: &ScatteringInput) -> Result<ScatteringAmplitudes, ScatteringError> {
    closed_form_amplitudes(&ScatteringInput { theta: -input.theta, ..*input })
}
