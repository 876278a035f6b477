use serde::Serialize;

use super::{Partition, PartitionKind};
use crate::error::{GapError, Result};
use crate::geometry::{ConvexPolygon, Vec2};
use crate::oned::{neumann_weighted_eig1, Interval, Weight1D};
use crate::planar::weighted_neumann_eig1;

/// Fraction of the diameter, centred, on which `h` is compared to an affine fit.
const CENTRAL: f64 = 0.6;
const PROFILE_SAMPLES: usize = 201;
const N_1D: usize = 1024;

#[derive(Clone, Debug, Serialize)]
pub struct CellDiagnostics {
    pub area: f64,
    pub diameter: f64,
    pub chord: [[f64; 2]; 2],
    pub width: f64,
    /// `(x, h(x))` along the diameter, `x ∈ [0, D]`.
    pub profile: Vec<(f64, f64)>,
    /// `(x, h(x) p(x))` along the diameter.
    pub weight: Vec<(f64, f64)>,
    pub h_min: f64,
    pub h_max: f64,
    /// Largest deviation of `h` from its least-squares affine fit on the central part.
    pub affinity_residual: f64,
    /// `μ₁(I_D, h p)` with its two-grid information.
    pub mu1: f64,
    pub mu1_error: f64,
}

/// Diameter, orthogonal section profile and the one-dimensional weighted
/// eigenvalue of a cell.
pub fn cell_diagnostics(
    cell: &ConvexPolygon,
    p: &(dyn Fn(Vec2) -> f64 + Sync),
) -> Result<CellDiagnostics> {
    let chord = cell.diameter();
    let d = chord.length;
    let e = chord.direction();
    let base = e.dot(&chord.a);
    let xs: Vec<f64> = (0..PROFILE_SAMPLES)
        .map(|i| d * i as f64 / (PROFILE_SAMPLES - 1) as f64)
        .collect();
    let profile: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| (x, cell.section_profile(e, base + x)))
        .collect();
    let weight: Vec<(f64, f64)> = profile
        .iter()
        .map(|&(x, h)| (x, h * p(chord.point_at(x / d))))
        .collect();

    let (c0, c1) = (0.5 * (1.0 - CENTRAL) * d, 0.5 * (1.0 + CENTRAL) * d);
    let central: Vec<(f64, f64)> = profile
        .iter()
        .cloned()
        .filter(|(x, _)| *x >= c0 && *x <= c1)
        .collect();
    let h_min = central.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let h_max = central.iter().map(|c| c.1).fold(0.0, f64::max);
    let affinity_residual = affine_residual(&central);

    let (pa, pe) = (chord.a, e);
    let floor = 1e-14 * weight.iter().map(|w| w.1).fold(0.0, f64::max);
    let samples: Vec<f64> = (0..=N_1D * 4)
        .map(|i| {
            let x = d * i as f64 / (N_1D * 4) as f64;
            (cell.section_profile(pe, base + x) * p(pa + pe * x)).max(floor)
        })
        .collect();
    let w = Weight1D::from_samples(Interval::new(0.0, d)?, samples)?;
    let r = neumann_weighted_eig1(Interval::new(0.0, d)?, &w, N_1D)?;
    Ok(CellDiagnostics {
        area: cell.area(),
        diameter: d,
        chord: [[chord.a.x, chord.a.y], [chord.b.x, chord.b.y]],
        width: cell.width(),
        profile,
        weight,
        h_min,
        h_max,
        affinity_residual,
        mu1: r.extrapolated_value,
        mu1_error: r.error_estimate,
    })
}

fn affine_residual(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if n < 2.0 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    pts.iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanValueReport {
    /// `∫|∇u|²p / ∫u²p` over the whole domain.
    pub global_rayleigh: f64,
    pub cell_rayleigh: Vec<f64>,
    /// `|global − mean of cell quotients| / global`.
    pub identity_residual: f64,
    /// `μ₁(ω_i, p)` from the weighted Neumann solver, with error estimates.
    pub cell_mu: Vec<(f64, f64)>,
    pub mean_cell_mu: f64,
    /// `(1/n) Σ μ₁(ω_i, p) ≤ global quotient + tol`.
    pub inequality_holds: bool,
}

/// Checks the `L²`-equipartition averaging identity and the eigenvalue
/// inequality against weighted Neumann eigenvalues of the cells.
/// `cells_across` sets each cell's grid spacing as width / `cells_across`.
pub fn mean_value_bound(
    part: &Partition,
    p: &(dyn Fn(Vec2) -> f64 + Sync),
    cells_across: f64,
) -> Result<MeanValueReport> {
    if part.kind != PartitionKind::L2 {
        return Err(GapError::Precondition(
            "mean-value bound needs an L² equipartition".into(),
        ));
    }
    let global_rayleigh = part.total.rayleigh();
    let cell_rayleigh: Vec<f64> = part.cells.iter().map(|c| c.integrals.rayleigh()).collect();
    let n = cell_rayleigh.len() as f64;
    let identity_residual = part.identity_residual();
    let mut cell_mu = Vec::new();
    for c in &part.cells {
        let r = weighted_neumann_eig1(&c.polygon, p, c.polygon.width() / cells_across)?;
        cell_mu.push((r.value, r.error_estimate));
    }
    let mean_cell_mu = cell_mu.iter().map(|c| c.0).sum::<f64>() / n;
    let tol = 3.0 * cell_mu.iter().map(|c| c.1).sum::<f64>() / n;
    Ok(MeanValueReport {
        global_rayleigh,
        cell_rayleigh,
        identity_residual,
        cell_mu,
        mean_cell_mu,
        inequality_holds: mean_cell_mu <= global_rayleigh + tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionReport {
    pub skipped: bool,
    pub note: Option<String>,
    pub n: usize,
    pub width: f64,
    pub diameter: f64,
    pub depth: f64,
    /// Longest section of each cell orthogonal to the domain's diameter.
    pub max_sections: Vec<f64>,
    pub areas: Vec<f64>,
    /// `min_i max_section_i · n / w`.
    pub fitted_lambda: f64,
    /// `min_i |ω_i| · n / |Ω|`.
    pub fitted_lambda_area: f64,
    /// Every cell satisfies `max_section ≥ 1 / (n η λ₂)`.
    pub depth_bound_holds: bool,
    pub pass: bool,
}

/// Section and area lower bounds for the cells of an `L²` equipartition of
/// `u₂/u₁` with weight `u₁²`. `lambda2` is the second Dirichlet eigenvalue.
pub fn section_lower_bound_check(
    part: &Partition,
    domain: &ConvexPolygon,
    lambda2: f64,
) -> Result<SectionReport> {
    let n = part.cells.len();
    let w = domain.width();
    let chord = domain.diameter();
    let dd = chord.length;
    let mut rep = SectionReport {
        skipped: false,
        note: None,
        n,
        width: w,
        diameter: dd,
        depth: 0.0,
        max_sections: Vec::new(),
        areas: Vec::new(),
        fitted_lambda: f64::NAN,
        fitted_lambda_area: f64::NAN,
        depth_bound_holds: false,
        pass: false,
    };
    if w > 0.5 * 3f64.sqrt() * dd {
        rep.skipped = true;
        rep.note = Some(format!(
            "width {w:.4} exceeds (√3/2)·diameter {:.4}",
            0.5 * 3f64.sqrt() * dd
        ));
        return Ok(rep);
    }
    if part.kind != PartitionKind::L2 {
        return Err(GapError::Precondition(
            "section bound needs an L² equipartition".into(),
        ));
    }
    let e = chord.direction();
    let eta = domain.depth(&chord)?;
    rep.depth = eta;
    for c in &part.cells {
        let (lo, hi) = c.polygon.projection_range(e);
        let k = 400;
        let best = (0..=k)
            .map(|i| {
                c.polygon
                    .section_profile(e, lo + (hi - lo) * i as f64 / k as f64)
            })
            .fold(0.0, f64::max);
        // Sections are concave in the offset, so vertex offsets bracket the maximum.
        let at_vertices = c
            .polygon
            .vertices()
            .iter()
            .map(|v| c.polygon.section_profile(e, e.dot(v)))
            .fold(0.0, f64::max);
        rep.max_sections.push(best.max(at_vertices));
        rep.areas.push(c.polygon.area());
    }
    let nf = n as f64;
    rep.fitted_lambda = rep
        .max_sections
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        * nf
        / w;
    rep.fitted_lambda_area =
        rep.areas.iter().cloned().fold(f64::INFINITY, f64::min) * nf / domain.area();
    let floor = 1.0 / (nf * eta * lambda2);
    rep.depth_bound_holds = rep.max_sections.iter().all(|&s| s >= floor * (1.0 - 1e-6));
    rep.pass = rep.fitted_lambda > 0.0 && rep.fitted_lambda_area > 0.0 && rep.depth_bound_holds;
    Ok(rep)
}
