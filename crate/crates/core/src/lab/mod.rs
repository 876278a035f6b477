//! Verification experiments: gap and Neumann floors, rigidity, localized
//! chord inequalities, exponent sweeps and the Schrödinger example.

mod localized;
mod sweep;

pub use localized::{random_chords, verify_localized, verify_localized_on, LocalizedReport};
pub use sweep::{
    exponent_sweep, fit_sweep, schrodinger_counterexample, sweep_member, Family, Mode,
    SchrodingerReport, SweepEntry, SweepReport, RECT_SLOPE, RECT_SLOPE_TOL,
};

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{john_ellipse, ConvexPolygon};
use crate::planar::{dirichlet_eigs, neumann_eig1};
use crate::richardson::TwoGrid;

/// Width-to-diameter ratio below which a domain counts as degenerate and the
/// rigidity check is skipped.
pub const NONDEGENERATE_RATIO: f64 = 0.02;

/// One inequality `value ≥ threshold − tol` (or `> threshold + tol` when strict).
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub tol: f64,
    pub strict: bool,
    pub pass: bool,
}

impl Check {
    pub fn at_least(name: &str, value: f64, threshold: f64, tol: f64) -> Self {
        let pass = value >= threshold - tol;
        Check {
            name: name.into(),
            value,
            threshold,
            tol,
            strict: false,
            pass,
        }
    }

    pub fn strictly_above(name: &str, value: f64, threshold: f64, tol: f64) -> Self {
        let pass = value - threshold > tol;
        Check {
            name: name.into(),
            value,
            threshold,
            tol,
            strict: true,
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub domain: String,
    pub delta: f64,
    pub diameter: f64,
    pub width: f64,
    pub depth: f64,
    /// Semi-axes `(a₁, a₂)` of the John ellipse, if its solve converged.
    pub john_axes: Option<(f64, f64)>,
    pub lambda1: Option<TwoGrid>,
    pub lambda2: Option<TwoGrid>,
    /// Two-grid gap, estimated from the gaps on both grids.
    pub gap: Option<TwoGrid>,
    pub mu1: Option<TwoGrid>,
    /// `3π²/D²`.
    pub gap_floor: f64,
    /// `π²/D²`.
    pub neumann_floor: f64,
    pub gap_excess: Option<f64>,
    pub neumann_excess: Option<f64>,
    /// `excess · D⁸ / w⁶`.
    pub implied_cbar: Option<f64>,
    /// `excess / a₂²`.
    pub neumann_ratio: Option<f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl GapReport {
    fn geometry(p: &ConvexPolygon, domain: &str, delta: f64) -> Result<Self> {
        let chord = p.diameter();
        let d = chord.length;
        Ok(GapReport {
            domain: domain.into(),
            delta,
            diameter: d,
            width: p.width(),
            depth: p.depth(&chord)?,
            john_axes: john_ellipse(p).ok().map(|e| e.semi_axes),
            lambda1: None,
            lambda2: None,
            gap: None,
            mu1: None,
            gap_floor: 3.0 * PI * PI / (d * d),
            neumann_floor: PI * PI / (d * d),
            gap_excess: None,
            neumann_excess: None,
            implied_cbar: None,
            neumann_ratio: None,
            checks: Vec::new(),
            pass: true,
        })
    }

    fn push(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.width / self.diameter >= NONDEGENERATE_RATIO
    }
}

/// Fundamental gap against `3π²/D²`, with the strict rigidity margin on
/// nondegenerate domains.
pub fn verify_gap(p: &ConvexPolygon, domain: &str, delta: f64) -> Result<GapReport> {
    let mut r = GapReport::geometry(p, domain, delta)?;
    let e = dirichlet_eigs(p, 2, delta)?;
    let gap = TwoGrid::new(
        e[1].coarse_value - e[0].coarse_value,
        e[1].value - e[0].value,
    );
    let excess = gap.extrapolated - r.gap_floor;
    r.lambda1 = Some(TwoGrid::new(e[0].coarse_value, e[0].value));
    r.lambda2 = Some(TwoGrid::new(e[1].coarse_value, e[1].value));
    r.gap = Some(gap);
    r.gap_excess = Some(excess);
    r.implied_cbar = Some(excess * r.diameter.powi(8) / r.width.powi(6));
    let tol = 3.0 * gap.error_estimate;
    r.push(Check::at_least(
        "gap_floor",
        gap.extrapolated,
        r.gap_floor,
        tol,
    ));
    if r.is_nondegenerate() {
        r.push(Check::strictly_above(
            "rigidity",
            gap.extrapolated,
            r.gap_floor,
            tol,
        ));
    }
    Ok(r)
}

/// First nonzero Neumann eigenvalue against `π²/D²`.
pub fn verify_neumann(p: &ConvexPolygon, domain: &str, delta: f64) -> Result<GapReport> {
    let mut r = GapReport::geometry(p, domain, delta)?;
    let m = neumann_eig1(p, delta)?;
    let mu = TwoGrid::new(m.coarse_value, m.value);
    let excess = mu.extrapolated - r.neumann_floor;
    r.mu1 = Some(mu);
    r.neumann_excess = Some(excess);
    r.neumann_ratio = r.john_axes.map(|(_, a2)| excess / (a2 * a2));
    r.push(Check::at_least(
        "neumann_floor",
        mu.extrapolated,
        r.neumann_floor,
        3.0 * mu.error_estimate,
    ));
    Ok(r)
}

#[cfg(test)]
mod tests;
