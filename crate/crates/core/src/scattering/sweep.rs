use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{closed_form_amplitudes, ScatteringError, ScatteringInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Theta,
    Separation,
    Coupling,
    Wavevector,
}

impl SweepKind {
    pub fn column(self) -> &'static str {
        match self {
            Self::Theta => "theta",
            Self::Separation => "N",
            Self::Coupling => "g",
            Self::Wavevector => "k_f",
        }
    }

    fn apply(self, base: &ScatteringInput, value: f64) -> Result<ScatteringInput, ScatteringError> {
        let mut input = *base;
        match self {
            Self::Theta => input.theta = value,
            Self::Coupling => input.g = value,
            Self::Wavevector => input.k_f = value,
            Self::Separation => {
                if !(value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(ScatteringError::InvalidInput {
                        field: "N",
                        reason: "separation must be a non-negative integer",
                    });
                }
                input.n_sep = value as usize;
            }
        }
        Ok(input)
    }
}

/// One sweep point. Coefficients are `NaN` and `error` is set when the point
/// could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    #[serde(rename = "T_a")]
    pub t_a: f64,
    #[serde(rename = "T_b")]
    pub t_b: f64,
    #[serde(rename = "R_a")]
    pub r_a: f64,
    #[serde(rename = "R_b")]
    pub r_b: f64,
    pub error: Option<String>,
}

/// Evaluates the closed form at every grid value in parallel, preserving order.
pub fn sweep(kind: SweepKind, base: &ScatteringInput, grid: &[f64]) -> Result<Vec<SweepRow>, ScatteringError> {
    if grid.is_empty() {
        return Err(ScatteringError::EmptyGrid);
    }
    Ok(grid
        .par_iter()
        .map(|&value| match kind.apply(base, value).and_then(|i| closed_form_amplitudes(&i)) {
            Ok(a) => {
                let c = a.coefficients();
                SweepRow { value, t_a: c.t_a, t_b: c.t_b, r_a: c.r_a, r_b: c.r_b, error: None }
            }
            Err(e) => SweepRow {
                value,
                t_a: f64::NAN,
                t_b: f64::NAN,
                r_a: f64::NAN,
                r_b: f64::NAN,
                error: Some(e.to_string()),
            },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn theta_grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| -PI + 2.0 * PI * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn best_routing_at_minus_half_pi() {
        let rows = sweep(SweepKind::Theta, &ScatteringInput::new(0.7, FRAC_PI_2, 3, 0.0), &theta_grid(41)).unwrap();
        let best = rows.iter().max_by(|a, b| a.t_b.total_cmp(&b.t_b)).unwrap();
        assert!((best.t_b - 1.0).abs() < 1e-12);
        assert!((best.value + FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn separations_one_and_three_mirror_in_theta() {
        let grid = theta_grid(41);
        let neg: Vec<f64> = grid.iter().map(|t| -t).collect();
        let n1 = sweep(SweepKind::Theta, &ScatteringInput::new(0.7, FRAC_PI_2, 1, 0.0), &neg).unwrap();
        let n3 = sweep(SweepKind::Theta, &ScatteringInput::new(0.7, FRAC_PI_2, 3, 0.0), &grid).unwrap();
        for (a, b) in n1.iter().zip(&n3) {
            assert!((a.t_b - b.t_b).abs() < 1e-12);
        }
    }

    #[test]
    fn single_value_matches_point_call() {
        let base = ScatteringInput::new(0.4, 1.3, 7, 0.2);
        let rows = sweep(SweepKind::Coupling, &base, &[0.9]).unwrap();
        let c = closed_form_amplitudes(&ScatteringInput { g: 0.9, ..base }).unwrap().coefficients();
        assert_eq!((rows[0].t_a, rows[0].t_b, rows[0].r_a, rows[0].r_b), (c.t_a, c.t_b, c.r_a, c.r_b));
    }

    #[test]
    fn bad_points_are_flagged_not_fatal() {
        let base = ScatteringInput::new(0.7, FRAC_PI_2, 0, 0.0);
        let rows = sweep(SweepKind::Separation, &base, &[1.0, 2.0, 2.5, 3.0]).unwrap();
        assert!(rows[0].error.is_none() && rows[3].error.is_none());
        assert!(rows[1].error.as_deref().unwrap().contains("singular"));
        assert!(rows[2].error.is_some() && rows[2].t_b.is_nan());
        assert_eq!(sweep(SweepKind::Theta, &base, &[]), Err(ScatteringError::EmptyGrid));
    }
}
