//! Eigenvalues of a symmetric tridiagonal matrix by the implicit QL
//! method with Wilkinson shifts (eigenvalues only, O(n²)).
//!
//! This is the workhorse behind the tridiagonal random-matrix sampler,
//! where dense solvers would dominate the sampling cost.

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e.len() == d.len() - 1`), sorted ascending.
pub fn eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    let n = d.len();
    assert!(n >= 1 && e.len() + 1 == n);
    let mut d = d.to_vec();
    // Work array with a trailing zero, 1-based style as in the classic QL.
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find a small off-diagonal element to split at.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "tridiagonal QL failed to converge");
            // Wilkinson shift.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0_f64;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = 0.0;
                let _ = f;
            }
            if e[m] != 0.0 || m == l {
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn two_by_two_closed_form() {
        // [[a, b], [b, c]] eigenvalues
        let (a, b, c) = (1.0, 2.0, -1.0);
        let ev = eigenvalues(&[a, c], &[b]);
        let mean = (a + c) / 2.0;
        let disc = ((a - c) / 2.0).hypot(b);
        assert!((ev[0] - (mean - disc)).abs() < 1e-12);
        assert!((ev[1] - (mean + disc)).abs() < 1e-12);
    }

    #[test]
    fn matches_dense_solver_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let n = rng.gen_range(1..=20);
            let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let e: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = d[i];
            }
            for i in 0..n - 1 {
                m[(i, i + 1)] = e[i];
                m[(i + 1, i)] = e[i];
            }
            let mut dense: Vec<f64> = nalgebra::SymmetricEigen::new(m)
                .eigenvalues
                .iter()
                .copied()
                .collect();
            dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let fast = eigenvalues(&d, &e);
            for (x, y) in fast.iter().zip(&dense) {
                assert!((x - y).abs() < 1e-10 * (1.0 + y.abs()), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn diagonal_matrix_passthrough() {
        let ev = eigenvalues(&[3.0, -1.0, 2.0], &[0.0, 0.0]);
        assert_eq!(ev, vec![-1.0, 2.0, 3.0]);
        assert_eq!(eigenvalues(&[5.0], &[]), vec![5.0]);
    }
}
