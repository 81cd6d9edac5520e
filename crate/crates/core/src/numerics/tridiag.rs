use crate::error::{Error, Result};

/// Relative pivot threshold below which the system is declared singular.
const PIVOT_EPS: f64 = 1e-14;

/// Thomas algorithm for `A x = rhs` with `A` tridiagonal.
///
/// `lower[i]` is `A[i+1][i]` and `upper[i]` is `A[i][i+1]`, so both have
/// length `n - 1`. No pivoting: callers supply diagonally dominant or
/// M-matrix systems.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || rhs.len() != n || lower.len() + 1 != n || upper.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "inconsistent tridiagonal dimensions: lower {}, diag {}, upper {}, rhs {}",
            lower.len(),
            n,
            upper.len(),
            rhs.len()
        )));
    }
    let row_scale = |i: usize| {
        let l = if i > 0 { lower[i - 1].abs() } else { 0.0 };
        let u = if i + 1 < n { upper[i].abs() } else { 0.0 };
        diag[i].abs().max(l).max(u)
    };

    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot.abs() <= PIVOT_EPS * row_scale(0) || pivot == 0.0 {
        return Err(Error::SingularSystem { row: 0 });
    }
    if n > 1 {
        c[0] = upper[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if pivot.abs() <= PIVOT_EPS * row_scale(i) || pivot == 0.0 {
            return Err(Error::SingularSystem { row: i });
        }
        if i + 1 < n {
            c[i] = upper[i] / pivot;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residual(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64], rhs: &[f64]) -> f64 {
        let n = diag.len();
        (0..n)
            .map(|i| {
                let mut r = diag[i] * x[i] - rhs[i];
                if i > 0 {
                    r += lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    r += upper[i] * x[i + 1];
                }
                r.abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_system() {
        let x = solve_tridiagonal(&[0.0, 0.0], &[1.0; 3], &[0.0, 0.0], &[3.0, -1.0, 4.0]).unwrap();
        assert_eq!(x, vec![3.0, -1.0, 4.0]);
    }

    #[test]
    fn two_by_two() {
        let x = solve_tridiagonal(&[1.0], &[2.0, 2.0], &[1.0], &[3.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_detected() {
        let r = solve_tridiagonal(&[0.0], &[0.0, 0.0], &[0.0], &[1.0, 2.0]);
        assert!(matches!(r, Err(Error::SingularSystem { row: 0 })));
        // singular only after elimination: [[1,1],[1,1]]
        let r = solve_tridiagonal(&[1.0], &[1.0, 1.0], &[1.0], &[1.0, 2.0]);
        assert!(matches!(r, Err(Error::SingularSystem { row: 1 })));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            solve_tridiagonal(&[1.0], &[1.0, 1.0, 1.0], &[1.0, 1.0], &[1.0; 3]),
            Err(Error::InvalidArgument(_))
        ));
    }

    proptest! {
        // symmetric, strictly diagonally dominant => SPD
        #[test]
        fn spd_residual(
            off in proptest::collection::vec(-1.0f64..1.0, 1..60),
            extra in proptest::collection::vec(0.01f64..2.0, 61),
            rhs_seed in proptest::collection::vec(-10.0f64..10.0, 61),
        ) {
            let n = off.len() + 1;
            let diag: Vec<f64> = (0..n)
                .map(|i| {
                    let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
                    let u = if i + 1 < n { off[i].abs() } else { 0.0 };
                    l + u + extra[i]
                })
                .collect();
            let rhs = &rhs_seed[..n];
            let x = solve_tridiagonal(&off, &diag, &off, rhs).unwrap();
            let scale = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            prop_assert!(residual(&off, &diag, &off, &x, rhs) <= 1e-10 * scale);
        }
    }
}
