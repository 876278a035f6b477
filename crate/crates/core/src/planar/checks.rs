use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::solve::{dirichlet_on_grid, weighted_neumann_on_grid};
use super::{neumann_eig1, weighted_neumann_eig1, Grid2D, GridFunction2D};
use crate::error::{GapError, Result};
use crate::geometry::{ConvexPolygon, Vec2};
use crate::oned::{neumann_weighted_eig1, Interval, Weight1D};
use crate::richardson::TwoGrid;
use crate::sampling;

/// Cells where `u₁` exceeds this fraction of its maximum enter the `u₂/u₁` quotient.
pub const DELTA_U: f64 = 1e-6;
/// Relative agreement required by the gap identity.
pub const GAP_IDENTITY_RTOL: f64 = 0.03;

#[derive(Clone, Debug, Serialize)]
pub struct GapIdentityReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    pub gap_error: f64,
    /// `μ₁(Ω, u₁²)` from the weighted Neumann solver.
    pub mu_weighted: f64,
    pub mu_error: f64,
    /// Rayleigh quotient of `ū = u₂/u₁` in `L²(u₁²)`.
    pub rayleigh_ubar: f64,
    /// Cells left out of the quotient because `u₁` is too small there.
    pub excluded_cells: usize,
    /// `(max − min) / gap` over the three values.
    pub spread: f64,
    pub pass: bool,
}

/// Compares `λ₂ − λ₁`, `μ₁(Ω, u₁²)` and the Rayleigh quotient of `u₂/u₁`.
pub fn gap_identity_check(p: &ConvexPolygon, delta: f64) -> Result<GapIdentityReport> {
    let fine = Arc::new(Grid2D::new(p, delta)?);
    let coarse = Arc::new(fine.coarsened()?);
    let (vf, ff, _) = dirichlet_on_grid(&fine, 2, None)?;
    let (vc, fc, _) = dirichlet_on_grid(&coarse, 2, None)?;
    let gap = TwoGrid::new(vc[1] - vc[0], vf[1] - vf[0]);
    let sq = |u: &GridFunction2D| u.values.iter().map(|v| v * v).collect::<Vec<_>>();
    let (mf, _, _) = weighted_neumann_on_grid(&fine, &sq(&ff[0]))?;
    let (mc, _, _) = weighted_neumann_on_grid(&coarse, &sq(&fc[0]))?;
    let mu = TwoGrid::new(mc, mf);
    let (rayleigh_ubar, excluded_cells) = ubar_rayleigh(&fine, &ff[0], &ff[1]);
    let vals = [gap.fine, mu.fine, rayleigh_ubar];
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / gap.fine;
    Ok(GapIdentityReport {
        lambda1: vf[0],
        lambda2: vf[1],
        gap: gap.fine,
        gap_error: gap.error_estimate,
        mu_weighted: mu.fine,
        mu_error: mu.error_estimate,
        rayleigh_ubar,
        excluded_cells,
        spread,
        pass: spread < GAP_IDENTITY_RTOL,
    })
}

fn ubar_rayleigh(g: &Grid2D, u1: &GridFunction2D, u2: &GridFunction2D) -> (f64, usize) {
    let top = u1.max_abs();
    let keep: Vec<bool> = u1.values.iter().map(|&v| v > DELTA_U * top).collect();
    let ubar: Vec<f64> = u1
        .values
        .iter()
        .zip(&u2.values)
        .map(|(a, b)| b / a)
        .collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for c in 0..g.len() {
        if !keep[c] {
            continue;
        }
        den += u1.values[c].powi(2) * ubar[c].powi(2);
        for (nb, dir) in g.neighbours(c) {
            if let Some(k) = nb {
                if k > c && keep[k] {
                    let h = if dir.x != 0.0 { g.hx } else { g.hy };
                    num += u1.values[c] * u1.values[k] * ((ubar[c] - ubar[k]) / h).powi(2);
                }
            }
        }
    }
    (num / den, keep.iter().filter(|k| !**k).count())
}

#[derive(Clone, Debug, Serialize)]
pub struct LinfReport {
    pub mu1: f64,
    /// `‖ū‖∞ / ‖ū‖_{L²(φ)}`.
    pub ratio: f64,
    /// `μ₁^{(N+m)/2} D^{N+m} / (∫φ)^{1/2}`.
    pub bound_factor: f64,
    pub implied_constant: f64,
    pub finite: bool,
}

/// `L∞` bound for the first weighted Neumann eigenfunction; `φ = None` means `φ ≡ 1`.
pub fn linf_bound_check(
    p: &ConvexPolygon,
    phi: Option<&dyn Fn(Vec2) -> f64>,
    m: f64,
    delta: f64,
) -> Result<LinfReport> {
    let e = match phi {
        Some(f) => weighted_neumann_eig1(p, f, delta)?,
        None => neumann_eig1(p, delta)?,
    };
    let g = &e.function.grid;
    let weights: Vec<f64> = match phi {
        Some(f) => g.centers().map(f).collect(),
        None => vec![1.0; g.len()],
    };
    let area = g.cell_area();
    let l2 = (e
        .function
        .values
        .iter()
        .zip(&weights)
        .map(|(u, w)| w * u * u)
        .sum::<f64>()
        * area)
        .sqrt();
    let ratio = e.function.max_abs() / l2;
    let mass: f64 = weights.iter().sum::<f64>() * area;
    let expo = 2.0 + m;
    let d = p.diameter().length;
    let bound_factor = e.value.powf(0.5 * expo) * d.powf(expo) / mass.sqrt();
    let implied_constant = ratio / bound_factor;
    Ok(LinfReport {
        mu1: e.value,
        ratio,
        bound_factor,
        implied_constant,
        finite: implied_constant.is_finite(),
    })
}

/// Convex hypograph `{(x, y): x ∈ iv, |y| < ε φ(x)/2}` sampled at `k + 1` abscissae.
pub fn hypograph(
    iv: Interval,
    phi: &dyn Fn(f64) -> f64,
    eps: f64,
    k: usize,
) -> Result<ConvexPolygon> {
    let xs: Vec<f64> = (0..=k)
        .map(|i| iv.a + iv.len() * i as f64 / k as f64)
        .collect();
    let mut pts: Vec<Vec2> = xs
        .iter()
        .map(|&x| Vec2::new(x, -0.5 * eps * phi(x).max(0.0)))
        .collect();
    pts.extend(
        xs.iter()
            .rev()
            .map(|&x| Vec2::new(x, 0.5 * eps * phi(x).max(0.0))),
    );
    ConvexPolygon::new(pts)
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapsingEntry {
    pub eps: f64,
    pub mu: f64,
    pub error_estimate: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapsingReport {
    /// `μ₁(Ω, φ)` from the one-dimensional solver.
    pub limit: f64,
    pub entries: Vec<CollapsingEntry>,
    /// Relative errors do not increase along the sequence beyond three times
    /// the solver error estimate.
    pub monotone: bool,
    pub final_rel_error: f64,
}

/// Neumann eigenvalues of collapsing hypographs against the weighted 1D limit.
/// `cells_across` sets the grid spacing as width / `cells_across`.
pub fn collapsing_check(
    iv: Interval,
    phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    eps: &[f64],
    cells_across: f64,
) -> Result<CollapsingReport> {
    if eps.is_empty() {
        return Err(GapError::InvalidInput("empty ε sequence".into()));
    }
    let f = phi.clone();
    let w = Weight1D::analytic(iv, move |x| f(x));
    let limit = neumann_weighted_eig1(iv, &w, 4096)?.extrapolated_value;
    let mut entries = Vec::new();
    for &e in eps {
        let poly = hypograph(iv, phi.as_ref(), e, 256)?;
        let r = neumann_eig1(&poly, poly.width() / cells_across)?;
        let mu = r.extrapolated;
        entries.push(CollapsingEntry {
            eps: e,
            mu,
            error_estimate: r.error_estimate,
            rel_error: (mu - limit).abs() / limit,
        });
    }
    let monotone = entries
        .windows(2)
        .all(|w| w[1].rel_error <= w[0].rel_error + 3.0 * w[1].error_estimate / limit);
    let final_rel_error = entries.last().unwrap().rel_error;
    Ok(CollapsingReport {
        limit,
        entries,
        monotone,
        final_rel_error,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LogConcavityReport {
    pub pairs: usize,
    /// Largest value of (left side − right side) over the pairs.
    pub worst_defect: f64,
    pub tolerance: f64,
    pub violations: usize,
}

/// Interior point with at least `margin` to the boundary, by rejection.
fn interior_point<R: Rng>(rng: &mut R, p: &ConvexPolygon, margin: f64) -> Vec2 {
    let (lo, hi) = p.bbox();
    loop {
        let q = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if p.signed_distance(q) >= margin {
            return q;
        }
    }
}

/// Midpoint concavity of `log u₁` along random interior segments whose endpoints
/// lie at least `margin` inside.
pub fn log_concavity_check(
    u1: &GridFunction2D,
    pairs: usize,
    margin: f64,
    tolerance: f64,
    seed: u64,
) -> LogConcavityReport {
    let p = &u1.grid.polygon;
    let mut rng = sampling::rng(seed);
    let lu = |q: Vec2| u1.interp(q).ln();
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    for _ in 0..pairs {
        let a = interior_point(&mut rng, p, margin);
        let b = interior_point(&mut rng, p, margin);
        let defect = 0.5 * (lu(a) + lu(b)) - lu(0.5 * (a + b));
        worst = worst.max(defect);
        if defect > tolerance {
            violations += 1;
        }
    }
    LogConcavityReport {
        pairs,
        worst_defect: worst,
        tolerance,
        violations,
    }
}

/// `∇ log u₁` by central differences of the interpolant with step `h`.
fn grad_log(u1: &GridFunction2D, q: Vec2, h: f64) -> Vec2 {
    let f = |d: Vec2| u1.interp(q + d).ln();
    Vec2::new(
        (f(Vec2::new(h, 0.0)) - f(Vec2::new(-h, 0.0))) / (2.0 * h),
        (f(Vec2::new(0.0, h)) - f(Vec2::new(0.0, -h))) / (2.0 * h),
    )
}

/// Pairwise improved log-concavity
/// `(∇log u₁(y) − ∇log u₁(x))·e ≤ −2(π/D) tan(π|y − x|/(2D))`, `e = (y − x)/|y − x|`,
/// on pairs at least `4Δ` from the boundary.
pub fn improved_log_concavity_check(
    u1: &GridFunction2D,
    pairs: usize,
    tolerance: f64,
    seed: u64,
) -> LogConcavityReport {
    let g = &u1.grid;
    let p = &g.polygon;
    let delta = g.hx.max(g.hy);
    let d = p.diameter().length;
    let mut rng = sampling::rng(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    let mut done = 0;
    while done < pairs {
        let x = interior_point(&mut rng, p, 4.0 * delta);
        let y = interior_point(&mut rng, p, 4.0 * delta);
        let r = (y - x).norm();
        if r < delta {
            continue;
        }
        let e = (y - x) / r;
        let lhs = (grad_log(u1, y, delta) - grad_log(u1, x, delta)).dot(&e);
        let rhs = -2.0 * (PI / d) * (PI * r / (2.0 * d)).tan();
        let defect = lhs - rhs;
        worst = worst.max(defect);
        if defect > tolerance {
            violations += 1;
        }
        done += 1;
    }
    LogConcavityReport {
        pairs,
        worst_defect: worst,
        tolerance,
        violations,
    }
}
