use num_complex::Complex64;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot falls below `rel_tol` times the largest
/// entry of `a`.
pub(crate) fn solve<const N: usize>(
    mut a: [[Complex64; N]; N],
    mut b: [Complex64; N],
    rel_tol: f64,
) -> Option<[Complex64; N]> {
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[pivot][col].norm() <= rel_tol * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv();
        for row in col + 1..N {
            let f = a[row][col] * inv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in col..N {
                let sub = f * a[col][c];
                a[row][c] -= sub;
            }
            let sub = f * b[col];
            b[row] -= sub;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); N];
    for row in (0..N).rev() {
        let mut acc = b[row];
        for c in row + 1..N {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn needs_pivoting() {
        let a = [[c(0.0, 0.0), c(1.0, 0.0)], [c(2.0, 0.0), c(0.0, 1.0)]];
        let x = solve(a, [c(3.0, 0.0), c(2.0, 3.0)], 1e-14).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_matrix() {
        let a = [[c(1.0, 1.0), c(2.0, 2.0)], [c(0.5, 0.5), c(1.0, 1.0)]];
        assert!(solve(a, [c(1.0, 0.0), c(0.0, 0.0)], 1e-13).is_none());
        assert!(solve([[c(0.0, 0.0); 3]; 3], [c(1.0, 0.0); 3], 1e-13).is_none());
    }

    #[test]
    fn random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut a = [[c(0.0, 0.0); 6]; 6];
            let mut x = [c(0.0, 0.0); 6];
            for i in 0..6 {
                x[i] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                for j in 0..6 {
                    a[i][j] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            let mut b = [c(0.0, 0.0); 6];
            for i in 0..6 {
                b[i] = (0..6).map(|j| a[i][j] * x[j]).sum();
            }
            let sol = solve(a, b, 1e-14).unwrap();
            let err = sol.iter().zip(&x).map(|(s, t)| (s - t).norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "err {err}");
        }
    }
}
