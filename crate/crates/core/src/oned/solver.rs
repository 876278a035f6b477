use serde::Serialize;

use super::{GridFunction, Interval, MeasurePotential, Weight1D, MIN_N};
use crate::error::{GapError, Result};
use crate::linalg::tridiag;
use crate::richardson::TwoGrid;

/// Smallest (nonzero) eigenvalue with its two-grid error information.
#[derive(Clone, Debug, Serialize)]
pub struct EigenResult1D {
    /// Eigenvalue on the `grid_size` grid.
    pub value: f64,
    /// `L²`-normalized eigenfunction (trapezoid rule), positive for Dirichlet problems.
    pub eigenfunction: GridFunction,
    pub grid_size: usize,
    /// Richardson extrapolation from `grid_size` and `2 grid_size` cells.
    pub extrapolated_value: f64,
    pub error_estimate: f64,
    /// Set when the potential grows faster than the inverse square distance to
    /// an endpoint of the finiteness domain, which the grid cannot resolve.
    pub warning: Option<String>,
}

impl EigenResult1D {
    /// Tolerance used by every comparison against a sharp constant.
    pub fn tol(&self) -> f64 {
        3.0 * self.error_estimate
    }
}

struct Tridiag {
    d: Vec<f64>,
    e: Vec<f64>,
    centers: Vec<f64>,
}

fn dirichlet_matrix(dom: Interval, q: &MeasurePotential, n: usize) -> Result<Tridiag> {
    let h = dom.len() / n as f64;
    let h2 = 1.0 / (h * h);
    let centers = dom.cell_centers(n);
    let mut d = Vec::with_capacity(n);
    for &x in &centers {
        let v = q.density.eval(x);
        if !(v >= 0.0) || !v.is_finite() {
            return Err(GapError::InvalidInput(format!(
                "potential density {v} at x = {x}"
            )));
        }
        d.push(2.0 * h2 + v);
    }
    // Ghost reflection puts the zero boundary value half a cell outside the last center.
    d[0] += h2;
    d[n - 1] += h2;
    let mut e = vec![-h2; n - 1];
    for &(s, mass) in &q.atoms {
        if !dom.contains(s) || mass == 0.0 {
            continue;
        }
        let t = (s - dom.a) / h - 0.5;
        if t < 0.0 {
            let w = (s - dom.a) / (0.5 * h);
            d[0] += mass * w * w / h;
        } else if t >= (n - 1) as f64 {
            let w = (dom.b - s) / (0.5 * h);
            d[n - 1] += mass * w * w / h;
        } else {
            let i = t.floor() as usize;
            let f = t - i as f64;
            d[i] += mass * (1.0 - f) * (1.0 - f) / h;
            d[i + 1] += mass * f * f / h;
            e[i] += mass * f * (1.0 - f) / h;
        }
    }
    Ok(Tridiag { d, e, centers })
}

fn endpoint_warning(dom: Interval, q: &MeasurePotential, n: usize) -> Option<String> {
    let h = dom.len() / n as f64;
    let scaled = |x: f64, dist: f64| q.density.eval(x) * dist * dist;
    for (side, x0, x3) in [
        ("left", dom.a + 0.5 * h, dom.a + 3.5 * h),
        ("right", dom.b - 0.5 * h, dom.b - 3.5 * h),
    ] {
        let r0 = scaled(x0, 0.5 * h);
        let r3 = scaled(x3, 3.5 * h);
        if r0 > 2.0 * r3 && r0 > 1.0 {
            return Some(format!(
                "potential outgrows the inverse-square scale at the {side} end"
            ));
        }
    }
    None
}

fn dirichlet_once(dom: Interval, q: &MeasurePotential, n: usize) -> Result<(f64, GridFunction)> {
    let t = dirichlet_matrix(dom, q, n)?;
    let lambda = tridiag::eigenvalue(&t.d, &t.e, 0)?;
    let mut v = tridiag::eigenvector(&t.d, &t.e, lambda)?;
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let mut xs = Vec::with_capacity(n + 2);
    xs.push(dom.a);
    xs.extend_from_slice(&t.centers);
    xs.push(dom.b);
    let mut vals = Vec::with_capacity(n + 2);
    vals.push(0.0);
    vals.extend_from_slice(&v);
    vals.push(0.0);
    let mut gf = GridFunction::new(xs, vals);
    let nrm = gf.l2_norm();
    gf.values.iter_mut().for_each(|x| *x /= nrm);
    Ok((lambda, gf))
}

/// First Dirichlet eigenvalue of `−v″ + q v` on `I ∩ dom q`.
///
/// Cell-centered finite differences with `n` cells on the finiteness domain;
/// atoms are shared between the two nearest centers by linear interpolation.
pub fn dirichlet_eig1(interval: Interval, q: &MeasurePotential, n: usize) -> Result<EigenResult1D> {
    if n < MIN_N {
        return Err(GapError::InvalidInput(format!(
            "grid size {n} below {MIN_N}"
        )));
    }
    let dom = interval.intersect(&q.dom).ok_or(GapError::EmptyDomain)?;
    let (coarse, f) = dirichlet_once(dom, q, n)?;
    let (fine, _) = dirichlet_once(dom, q, 2 * n)?;
    let tg = TwoGrid::new(coarse, fine);
    Ok(EigenResult1D {
        value: coarse,
        eigenfunction: f,
        grid_size: n,
        extrapolated_value: tg.extrapolated,
        error_estimate: tg.error_estimate,
        warning: endpoint_warning(dom, q, n),
    })
}

fn neumann_once(dom: Interval, p: &Weight1D, n: usize) -> Result<(f64, GridFunction)> {
    let h = dom.len() / n as f64;
    let centers = dom.cell_centers(n);
    let mass: Vec<f64> = centers.iter().map(|&x| p.eval(x) * h).collect();
    if mass.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
        return Err(GapError::DegenerateWeight);
    }
    let face: Vec<f64> = (1..n)
        .map(|i| {
            let w = p.eval(dom.a + i as f64 * h);
            if w > 0.0 && w.is_finite() {
                w / h
            } else {
                // Harmonic mean of the neighbours when the face sample is unusable.
                let (l, r) = (mass[i - 1], mass[i]);
                2.0 * l * r / (l + r) / (h * h)
            }
        })
        .collect();
    let mut d = vec![0.0; n];
    for i in 0..n - 1 {
        d[i] += face[i];
        d[i + 1] += face[i];
    }
    let sq: Vec<f64> = mass.iter().map(|m| m.sqrt()).collect();
    let ds: Vec<f64> = (0..n).map(|i| d[i] / mass[i]).collect();
    let es: Vec<f64> = (0..n - 1).map(|i| -face[i] / (sq[i] * sq[i + 1])).collect();
    let mu = tridiag::eigenvalue(&ds, &es, 1)?;
    let w = tridiag::eigenvector(&ds, &es, mu)?;
    let mut v: Vec<f64> = w.iter().zip(&sq).map(|(a, s)| a / s).collect();
    let first_nonzero = v.iter().find(|x| x.abs() > 0.0).copied().unwrap_or(1.0);
    if first_nonzero > 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let mut gf = GridFunction::new(centers, v);
    let nrm = gf.l2_norm();
    gf.values.iter_mut().for_each(|x| *x /= nrm);
    Ok((mu, gf))
}

/// Smallest nonzero eigenvalue of `−(p v′)′ = μ p v` with natural boundary
/// conditions on the finiteness domain of `p` intersected with `I`.
pub fn neumann_weighted_eig1(interval: Interval, p: &Weight1D, n: usize) -> Result<EigenResult1D> {
    if n < MIN_N {
        return Err(GapError::InvalidInput(format!(
            "grid size {n} below {MIN_N}"
        )));
    }
    let dom = interval.intersect(&p.dom).ok_or(GapError::EmptyDomain)?;
    let (coarse, f) = neumann_once(dom, p, n)?;
    let (fine, _) = neumann_once(dom, p, 2 * n)?;
    let tg = TwoGrid::new(coarse, fine);
    Ok(EigenResult1D {
        value: coarse,
        eigenfunction: f,
        grid_size: n,
        extrapolated_value: tg.extrapolated,
        error_estimate: tg.error_estimate,
        warning: None,
    })
}
