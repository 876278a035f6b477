//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for the
//! eigenvalues, inverse iteration for the eigenvectors.

use crate::error::{GapError, Result};

/// Number of eigenvalues strictly below `x` of the tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (`e.len() == d.len() - 1`).
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - off;
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    (lo, hi)
}

/// `k`-th smallest eigenvalue (zero-based), bisected to full precision.
pub fn eigenvalue(d: &[f64], e: &[f64], k: usize) -> Result<f64> {
    if k >= d.len() {
        return Err(GapError::SolverFailed(format!(
            "eigenvalue {k} of a {}x{} matrix",
            d.len(),
            d.len()
        )));
    }
    let (mut lo, mut hi) = gershgorin(d, e);
    let pad = 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
    lo -= pad;
    hi += pad;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    if !x.is_finite() {
        return Err(GapError::SolverFailed("non-finite Sturm bisection".into()));
    }
    Ok(x)
}

/// Unit eigenvector for the eigenvalue `lambda` by inverse iteration.
pub fn eigenvector(d: &[f64], e: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = d.len();
    let scale = d
        .iter()
        .chain(e)
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let shift = lambda - 1e-13 * scale;
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.1 * ((i * 7919 % 113) as f64 / 113.0))
        .collect();
    normalize(&mut x);
    for _ in 0..4 {
        x = solve_shifted(d, e, shift, &x);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(GapError::SolverFailed("inverse iteration diverged".into()));
        }
        normalize(&mut x);
    }
    Ok(x)
}

fn normalize(x: &mut [f64]) {
    let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= nrm);
}

/// Solves `(T - s I) y = b` by Gaussian elimination with partial pivoting.
fn solve_shifted(d: &[f64], e: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    let n = d.len();
    if n == 1 {
        let p = d[0] - s;
        return vec![b[0] / if p == 0.0 { f64::MIN_POSITIVE } else { p }];
    }
    // Row i of the eliminated system: u0[i] y_i + u1[i] y_{i+1} + u2[i] y_{i+2} = r[i].
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut r = b.to_vec();
    let tiny = f64::EPSILON * (d.iter().fold(0.0f64, |m, v| m.max(v.abs())) + s.abs() + 1.0);
    // Current pending row: (a, c, f) coefficients on y_i, y_{i+1}, y_{i+2}.
    let mut a = d[0] - s;
    let mut c = e[0];
    let mut f = 0.0;
    for i in 0..n - 1 {
        let lo = e[i];
        let dn = d[i + 1] - s;
        let en = if i + 1 < n - 1 { e[i + 1] } else { 0.0 };
        if a.abs() >= lo.abs() {
            let piv = if a == 0.0 { tiny } else { a };
            let m = lo / piv;
            u0[i] = piv;
            u1[i] = c;
            u2[i] = f;
            r[i + 1] -= m * r[i];
            a = dn - m * c;
            c = en - m * f;
            f = 0.0;
        } else {
            let m = a / lo;
            u0[i] = lo;
            u1[i] = dn;
            u2[i] = en;
            let ri = r[i];
            r[i] = r[i + 1];
            r[i + 1] = ri - m * r[i];
            let na = c - m * dn;
            let nc = f - m * en;
            a = na;
            c = nc;
            f = 0.0;
        }
    }
    u0[n - 1] = if a == 0.0 { tiny } else { a };
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = r[i];
        if i + 1 < n {
            v -= u1[i] * y[i + 1];
        }
        if i + 2 < n {
            v -= u2[i] * y[i + 2];
        }
        y[i] = v / u0[i];
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        for k in 0..5 {
            let exact = 2.0 - 2.0 * (PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((eigenvalue(&d, &e, k).unwrap() - exact).abs() < 1e-13);
        }
        let lam = eigenvalue(&d, &e, 0).unwrap();
        let v = eigenvector(&d, &e, lam).unwrap();
        let s = v[0].signum();
        for i in 0..n {
            let exact =
                (PI * (i + 1) as f64 / (n + 1) as f64).sin() * (2.0 / (n + 1) as f64).sqrt();
            assert!((s * v[i] - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn matches_dense_solver() {
        let n = 30;
        let d: Vec<f64> = (0..n).map(|i| ((i * 37) % 11) as f64 - 3.0).collect();
        let e: Vec<f64> = (0..n - 1)
            .map(|i| ((i * 13) % 7) as f64 * 0.3 + 0.1)
            .collect();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                d[i]
            } else if i + 1 == j {
                e[i]
            } else if j + 1 == i {
                e[j]
            } else {
                0.0
            }
        });
        let mut ev: Vec<f64> = m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        ev.sort_by(f64::total_cmp);
        for k in 0..n {
            let lam = eigenvalue(&d, &e, k).unwrap();
            assert!((lam - ev[k]).abs() < 1e-11, "{k}: {lam} vs {}", ev[k]);
            let v = eigenvector(&d, &e, lam).unwrap();
            let res = (&m * nalgebra::DVector::from_vec(v.clone()))
                - nalgebra::DVector::from_vec(v) * lam;
            assert!(res.norm() < 1e-9, "{k}: residual {}", res.norm());
        }
    }
}
