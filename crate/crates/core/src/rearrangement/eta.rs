//! Constrained eigenvalue problem with a stratified potential.

use serde::Serialize;

use crate::error::{GapError, Result};
use crate::linalg::tridiag;
use crate::oned::{GridFunction, Interval, Sampler, MIN_N};
use crate::richardson::TwoGrid;

#[derive(Clone, Debug, Serialize)]
pub struct Eta1Result {
    pub value: f64,
    pub extrapolated: f64,
    pub error_estimate: f64,
    pub grid_size: usize,
    /// Minimizer on the `grid_size` grid, `L²`-normalized.
    pub eigenfunction: GridFunction,
    pub iterations: usize,
}

impl Eta1Result {
    pub fn tol(&self) -> f64 {
        3.0 * self.error_estimate
    }
}

/// Smallest value of `∫ φ′² + 2Vφ² / ∫ φ²` over `H¹₀(I_π)` with
/// `φ(a₁) = φ(a₂) = φ(a₃)` for each triple.
pub fn eta1_stratified(
    v: &Sampler,
    constraints: &[(f64, f64, f64)],
    n: usize,
) -> Result<Eta1Result> {
    if n < MIN_N {
        return Err(GapError::InvalidInput(format!(
            "grid size {n} below {MIN_N}"
        )));
    }
    let iv = Interval::i_pi();
    for &(a1, a2, a3) in constraints {
        if !(a1 <= a2 && a2 <= a3) || !iv.contains(a1) || !iv.contains(a3) {
            return Err(GapError::InvalidInput(format!(
                "constraint triple ({a1}, {a2}, {a3})"
            )));
        }
    }
    let coarse = solve(iv, v, constraints, n)?;
    let fine = solve(iv, v, constraints, 2 * n)?;
    let tg = TwoGrid::new(coarse.0, fine.0);
    Ok(Eta1Result {
        value: coarse.0,
        extrapolated: tg.extrapolated,
        error_estimate: tg.error_estimate,
        grid_size: n,
        eigenfunction: coarse.1,
        iterations: coarse.2,
    })
}

/// In-place solve of a symmetric positive definite tridiagonal system.
fn thomas(d: &[f64], e: &[f64], rhs: &mut [f64], scratch: &mut [f64]) {
    let n = d.len();
    scratch[0] = d[0];
    for i in 1..n {
        let l = e[i - 1] / scratch[i - 1];
        scratch[i] = d[i] - l * e[i - 1];
        rhs[i] -= l * rhs[i - 1];
    }
    rhs[n - 1] /= scratch[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - e[i] * rhs[i + 1]) / scratch[i];
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Interior nodes of a mesh of spacing at most `π / n` that contains every
/// constraint point.
fn mesh(iv: Interval, constraints: &[(f64, f64, f64)], n: usize) -> Vec<f64> {
    let mut breaks = vec![iv.a, iv.b];
    for &(a1, a2, a3) in constraints {
        breaks.extend([a1, a2, a3]);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);
    let h = iv.len() / n as f64;
    let mut xs = vec![iv.a];
    for w in breaks.windows(2) {
        let k = ((w[1] - w[0]) / h).ceil().max(1.0) as usize;
        xs.extend((1..=k).map(|j| w[0] + (w[1] - w[0]) * j as f64 / k as f64));
    }
    *xs.last_mut().unwrap() = iv.b;
    xs
}

fn node_index(xs: &[f64], x: f64) -> Option<usize> {
    let i = xs.partition_point(|&t| t < x - 1e-12);
    (1..xs.len() - 1).contains(&i).then_some(i - 1)
}

fn solve(
    iv: Interval,
    v: &Sampler,
    constraints: &[(f64, f64, f64)],
    n: usize,
) -> Result<(f64, GridFunction, usize)> {
    let xs = mesh(iv, constraints, n);
    let nn = xs.len() - 2;
    let hs: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let mut k_diag = vec![0.0; nn];
    let mut k_off = vec![0.0; nn.saturating_sub(1)];
    let mut mass = vec![0.0; nn];
    for i in 0..nn {
        let (hl, hr) = (hs[i], hs[i + 1]);
        let x = xs[i + 1];
        // One-sided samples, since V jumps at tree endpoints.
        let ql = 2.0 * v.eval(x - 1e-9 * hl);
        let qr = 2.0 * v.eval(x + 1e-9 * hr);
        if !ql.is_finite() || !qr.is_finite() {
            return Err(GapError::InvalidInput(format!(
                "potential is not finite at x = {x}"
            )));
        }
        mass[i] = 0.5 * (hl + hr);
        k_diag[i] = 1.0 / hl + 1.0 / hr + 0.5 * (ql * hl + qr * hr);
        if i + 1 < nn {
            k_off[i] = -1.0 / hr;
        }
    }
    let sq: Vec<f64> = mass.iter().map(|m| m.sqrt()).collect();
    let d: Vec<f64> = (0..nn).map(|i| k_diag[i] / mass[i]).collect();
    let e: Vec<f64> = (0..nn.saturating_sub(1))
        .map(|i| k_off[i] / (sq[i] * sq[i + 1]))
        .collect();
    let n = nn;

    // Rows of C act on the symmetrized unknowns y = M^{1/2} x.
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    for &(a1, a2, a3) in constraints {
        for (p, q) in [(a1, a2), (a2, a3)] {
            let mut r = Vec::new();
            if let Some(i) = node_index(&xs, p) {
                r.push((i, 1.0 / sq[i]));
            }
            if let Some(j) = node_index(&xs, q) {
                r.push((j, -1.0 / sq[j]));
            }
            if r.len() == 2 && r[0].0 == r[1].0 {
                continue;
            }
            if !r.is_empty() {
                rows.push(r);
            }
        }
    }
    let lambda0 = tridiag::eigenvalue(&d, &e, 0)?;
    let sigma = lambda0 - 1.0;
    let ds: Vec<f64> = d.iter().map(|x| x - sigma).collect();
    let mut scratch = vec![0.0; n];

    // W = (A − σ)⁻¹ Cᵀ and the Schur complement S = C W.
    let m = rows.len();
    let mut w_cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    for r in &rows {
        let mut col = vec![0.0; n];
        for &(i, w) in r {
            col[i] += w;
        }
        thomas(&ds, &e, &mut col, &mut scratch);
        w_cols.push(col);
    }
    let apply_c = |x: &[f64], r: &Vec<(usize, f64)>| r.iter().map(|&(i, w)| w * x[i]).sum::<f64>();
    let s = nalgebra::DMatrix::from_fn(m, m, |i, j| apply_c(&w_cols[j], &rows[i]));
    let s_svd = if m > 0 {
        // Dependent constraints (e.g. coinciding points) make S singular; drop them via SVD.
        Some(s.clone().svd(true, true))
    } else {
        None
    };

    let project = |y: &mut Vec<f64>| {
        if let Some(svd) = &s_svd {
            let cy = nalgebra::DVector::from_iterator(m, rows.iter().map(|r| apply_c(y, r)));
            let smax = svd.singular_values.max();
            let mu = svd.solve(&cy, 1e-12 * smax).expect("svd has both factors");
            for (j, col) in w_cols.iter().enumerate() {
                let c = mu[j];
                y.iter_mut().zip(col).for_each(|(a, b)| *a -= c * b);
            }
        }
    };

    let inner = &xs[1..=n];
    let mut x: Vec<f64> = inner
        .iter()
        .map(|c| c.cos().powi(2) + 0.1 * (3.0 * c).sin().abs())
        .collect();
    let rayleigh = |x: &[f64]| {
        let mut ax = 0.0;
        for i in 0..n {
            let mut y = d[i] * x[i];
            if i > 0 {
                y += e[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y += e[i] * x[i + 1];
            }
            ax += y * x[i];
        }
        ax / dot(x, x)
    };
    let mut theta = f64::INFINITY;
    let max_iter = 20_000;
    for it in 0..max_iter {
        let mut y = x.clone();
        thomas(&ds, &e, &mut y, &mut scratch);
        project(&mut y);
        let nrm = dot(&y, &y).sqrt();
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(GapError::SolverFailed(
                "constrained inverse iteration broke down".into(),
            ));
        }
        y.iter_mut().for_each(|a| *a /= nrm);
        let t = rayleigh(&y);
        x = y;
        if (theta - t).abs() <= 1e-13 * t.abs().max(1.0) {
            theta = t;
            let xv: Vec<f64> = x.iter().zip(&sq).map(|(a, s)| a / s).collect();
            return Ok((theta, finish(&xs, xv), it + 1));
        }
        theta = t;
    }
    Err(GapError::SolverFailed(format!(
        "constrained inverse iteration did not converge in {max_iter} steps"
    )))
}

fn finish(xs: &[f64], mut x: Vec<f64>) -> GridFunction {
    if x.iter().sum::<f64>() < 0.0 {
        x.iter_mut().for_each(|a| *a = -*a);
    }
    let mut vs = vec![0.0];
    vs.extend(x);
    vs.push(0.0);
    let mut g = GridFunction::new(xs.to_vec(), vs);
    let nrm = g.l2_norm();
    g.values.iter_mut().for_each(|a| *a /= nrm);
    g
}
