use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::{Grid2D, GridFunction2D};
use crate::error::Result;
use crate::geometry::{ConvexPolygon, Vec2};
use crate::linalg::{smallest_eigenpairs, EigenOptions, SparseSym, TripletBuilder};
use crate::richardson::TwoGrid;

/// Floor applied to weights, relative to their maximum.
pub const EPS_WEIGHT: f64 = 1e-14;
/// Smallest boundary fraction used in the Dirichlet stencil.
const MIN_THETA: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    Dirichlet,
    Neumann,
    WeightedNeumann,
}

/// Eigenpair on the fine grid with its two-grid information.
#[derive(Clone, Debug)]
pub struct EigenPair2D {
    pub kind: Kind,
    pub value: f64,
    /// Same eigenvalue on the grid of twice the spacing.
    pub coarse_value: f64,
    pub extrapolated: f64,
    pub error_estimate: f64,
    /// `∫ u² = 1` (unweighted kinds) or `∫ φu² = 1` (weighted kind).
    pub function: GridFunction2D,
    pub residual: f64,
}

impl EigenPair2D {
    pub fn tol(&self) -> f64 {
        3.0 * self.error_estimate
    }

    fn from_levels(
        kind: Kind,
        fine: f64,
        coarse: f64,
        function: GridFunction2D,
        residual: f64,
    ) -> Self {
        let tg = TwoGrid::new(coarse, fine);
        EigenPair2D {
            kind,
            value: fine,
            coarse_value: coarse,
            extrapolated: tg.extrapolated,
            error_estimate: tg.error_estimate,
            function,
            residual,
        }
    }
}

/// Grid spacing giving 60 cells across the width.
pub fn default_delta(p: &ConvexPolygon) -> f64 {
    p.width() / 60.0
}

fn axis_h(g: &Grid2D, dir: Vec2) -> f64 {
    if dir.x != 0.0 {
        g.hx
    } else {
        g.hy
    }
}

/// 5-point Laplacian with zero boundary values at the true boundary crossing,
/// plus an optional potential on the diagonal.
pub fn dirichlet_matrix(g: &Grid2D, potential: Option<&dyn Fn(Vec2) -> f64>) -> SparseSym {
    let mut b = TripletBuilder::new(g.len());
    for c in 0..g.len() {
        let p = g.center(c);
        for (nb, dir) in g.neighbours(c) {
            let h = axis_h(g, dir);
            match nb {
                Some(k) if k > c => b.add_edge(c, k, 1.0 / (h * h)),
                Some(_) => {}
                None => {
                    let theta = (g.ray_exit(p, dir) / h).clamp(MIN_THETA, 1.0);
                    b.add_diag(c, 1.0 / (theta * h * h));
                }
            }
        }
        if let Some(v) = potential {
            b.add_diag(c, v(p));
        }
    }
    b.build()
}

/// Weighted Neumann stencil: harmonic-mean face weights, no flux through the
/// staircase boundary.
pub fn weighted_neumann_matrix(g: &Grid2D, phi: &[f64]) -> SparseSym {
    let mut b = TripletBuilder::new(g.len());
    for c in 0..g.len() {
        for (nb, dir) in g.neighbours(c) {
            if let Some(k) = nb {
                if k > c {
                    let h = axis_h(g, dir);
                    let w = 2.0 * phi[c] * phi[k] / (phi[c] + phi[k]);
                    b.add_edge(c, k, w / (h * h));
                }
            }
        }
    }
    b.build()
}

fn floor_weight(phi: &[f64]) -> Vec<f64> {
    let top = phi.iter().fold(0.0f64, |a, v| a.max(*v));
    let floor = EPS_WEIGHT * top;
    phi.iter()
        .map(|&v| if v > floor { v } else { floor })
        .collect()
}

fn orient(v: &mut [f64], positive_sum: bool) {
    let flip = if positive_sum {
        v.iter().sum::<f64>() < 0.0
    } else {
        let top = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        v.iter()
            .find(|x| x.abs() > 1e-3 * top)
            .map_or(false, |x| *x < 0.0)
    };
    if flip {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// The `k` smallest Dirichlet eigenpairs on one grid, with `∫u² = 1`.
pub fn dirichlet_on_grid(
    g: &Arc<Grid2D>,
    k: usize,
    potential: Option<&dyn Fn(Vec2) -> f64>,
) -> Result<(Vec<f64>, Vec<GridFunction2D>, Vec<f64>)> {
    let kmat = dirichlet_matrix(g, potential);
    let area = g.cell_area();
    let m = vec![1.0; g.len()];
    let inradius = g.dist.iter().fold(0.0f64, |a, d| a.max(*d)) + g.hx.max(g.hy);
    let opts = EigenOptions::new(k, 0.9 * PI * PI / (4.0 * inradius * inradius));
    let r = smallest_eigenpairs(&kmat, &m, &opts)?;
    let scale = 1.0 / area.sqrt();
    let funcs = r
        .vectors
        .into_iter()
        .enumerate()
        .map(|(i, mut v)| {
            orient(&mut v, i == 0);
            v.iter_mut().for_each(|x| *x *= scale);
            GridFunction2D::new(g.clone(), v, true)
        })
        .collect();
    Ok((r.values, funcs, r.residuals))
}

/// Smallest nonzero eigenvalue of `−div(φ∇u) = μφu` on one grid, `∫φu² = 1`.
pub fn weighted_neumann_on_grid(
    g: &Arc<Grid2D>,
    phi: &[f64],
) -> Result<(f64, GridFunction2D, f64)> {
    let phi = floor_weight(phi);
    let kmat = weighted_neumann_matrix(g, &phi);
    let total: f64 = phi.iter().sum();
    let z = vec![1.0 / total.sqrt(); g.len()];
    let mut opts = EigenOptions::new(1, -1.0);
    opts.deflate = vec![z];
    let r = smallest_eigenpairs(&kmat, &phi, &opts)?;
    let mut v = r.vectors.into_iter().next().unwrap();
    orient(&mut v, false);
    let scale = 1.0 / g.cell_area().sqrt();
    v.iter_mut().for_each(|x| *x *= scale);
    Ok((
        r.values[0],
        GridFunction2D::new(g.clone(), v, false),
        r.residuals[0],
    ))
}

fn grids(p: &ConvexPolygon, delta: f64) -> Result<(Arc<Grid2D>, Arc<Grid2D>)> {
    let fine = Grid2D::new(p, delta)?;
    let coarse = fine.coarsened()?;
    Ok((Arc::new(fine), Arc::new(coarse)))
}

/// The `k` smallest Dirichlet eigenpairs, ascending, `u₁ > 0`.
pub fn dirichlet_eigs(p: &ConvexPolygon, k: usize, delta: f64) -> Result<Vec<EigenPair2D>> {
    dirichlet_eigs_with_potential(p, k, delta, None)
}

/// Dirichlet eigenpairs of `−Δ + V`.
pub fn dirichlet_eigs_with_potential(
    p: &ConvexPolygon,
    k: usize,
    delta: f64,
    potential: Option<&dyn Fn(Vec2) -> f64>,
) -> Result<Vec<EigenPair2D>> {
    let (fine, coarse) = grids(p, delta)?;
    let (vf, ff, rf) = dirichlet_on_grid(&fine, k, potential)?;
    let (vc, _, _) = dirichlet_on_grid(&coarse, k, potential)?;
    Ok(ff
        .into_iter()
        .enumerate()
        .map(|(i, f)| EigenPair2D::from_levels(Kind::Dirichlet, vf[i], vc[i], f, rf[i]))
        .collect())
}

/// First nonzero Neumann eigenpair.
pub fn neumann_eig1(p: &ConvexPolygon, delta: f64) -> Result<EigenPair2D> {
    let (fine, coarse) = grids(p, delta)?;
    let (mf, f, r) = weighted_neumann_on_grid(&fine, &vec![1.0; fine.len()])?;
    let (mc, _, _) = weighted_neumann_on_grid(&coarse, &vec![1.0; coarse.len()])?;
    Ok(EigenPair2D::from_levels(Kind::Neumann, mf, mc, f, r))
}

/// First nonzero eigenpair of `−div(φ∇u) = μφu` with natural boundary conditions.
pub fn weighted_neumann_eig1(
    p: &ConvexPolygon,
    phi: &dyn Fn(Vec2) -> f64,
    delta: f64,
) -> Result<EigenPair2D> {
    let (fine, coarse) = grids(p, delta)?;
    let pf: Vec<f64> = fine.centers().map(phi).collect();
    let pc: Vec<f64> = coarse.centers().map(phi).collect();
    let (mf, f, r) = weighted_neumann_on_grid(&fine, &pf)?;
    let (mc, _, _) = weighted_neumann_on_grid(&coarse, &pc)?;
    Ok(EigenPair2D::from_levels(
        Kind::WeightedNeumann,
        mf,
        mc,
        f,
        r,
    ))
}
