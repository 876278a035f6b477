use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{GapError, Result};
use crate::geometry::{shapes, ConvexPolygon, Vec2};
use crate::planar::{dirichlet_eigs, dirichlet_eigs_with_potential, neumann_eig1};
use crate::richardson::TwoGrid;

/// Slope expected for rectangles in both modes, and its tolerance.
pub const RECT_SLOPE: f64 = 2.0;
pub const RECT_SLOPE_TOL: f64 = 0.1;
const MIN_FIT_POINTS: usize = 4;

/// Domain family parameterized by a width-like scale `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Family {
    /// `(0, π) × (0, t)`.
    Rects,
    /// Unit-radius sector of opening angle `t`.
    Sectors,
    /// Regular `k`-gon squeezed vertically by `t`.
    Ngons(usize),
    /// Seeded random `k`-gon squeezed vertically by `t`.
    Random { k: usize, seed: u64 },
}

impl Family {
    pub fn member(&self, t: f64) -> Result<ConvexPolygon> {
        if !(t > 0.0) {
            return Err(GapError::InvalidInput(format!(
                "family parameter {t} must be positive"
            )));
        }
        match *self {
            Family::Rects => Ok(shapes::rect(PI, t)),
            Family::Sectors => shapes::sector(t),
            Family::Ngons(k) => squeeze(&shapes::regular_ngon(k), t),
            Family::Random { k, seed } => squeeze(&shapes::random_polygon(k, seed)?, t),
        }
    }
}

fn squeeze(p: &ConvexPolygon, t: f64) -> Result<ConvexPolygon> {
    ConvexPolygon::new(
        p.vertices()
            .iter()
            .map(|v| Vec2::new(v.x, t * v.y))
            .collect(),
    )
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Rects => write!(f, "rects"),
            Family::Sectors => write!(f, "sectors"),
            Family::Ngons(k) => write!(f, "ngons:{k}"),
            Family::Random { k, seed } => write!(f, "random:{k}:{seed}"),
        }
    }
}

impl FromStr for Family {
    type Err = GapError;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || GapError::InvalidInput(format!("unknown family `{s}`"));
        let int = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["rects"] => Ok(Family::Rects),
            ["sectors"] => Ok(Family::Sectors),
            ["ngons"] => Ok(Family::Ngons(6)),
            ["ngons", k] => Ok(Family::Ngons(int(k)? as usize)),
            ["random"] => Ok(Family::Random { k: 6, seed: 0 }),
            ["random", k, seed] => Ok(Family::Random {
                k: int(k)? as usize,
                seed: int(seed)?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// `λ₂ − λ₁ − 3π²/D²`.
    Dirichlet,
    /// `μ₁ − π²/D²`.
    Neumann,
}

impl FromStr for Mode {
    type Err = GapError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Mode::Dirichlet),
            "neumann" => Ok(Mode::Neumann),
            _ => Err(GapError::InvalidInput(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub param: f64,
    pub width: f64,
    pub diameter: f64,
    pub delta: f64,
    pub value: TwoGrid,
    pub floor: f64,
    pub excess: f64,
}

/// One family member, resolved with `cells_across` cells over its width.
pub fn sweep_member(family: Family, t: f64, mode: Mode, cells_across: f64) -> Result<SweepEntry> {
    let p = family.member(t)?;
    let w = p.width();
    let d = p.diameter().length;
    let delta = w / cells_across;
    let (value, floor) = match mode {
        Mode::Dirichlet => {
            let e = dirichlet_eigs(&p, 2, delta)?;
            (
                TwoGrid::new(
                    e[1].coarse_value - e[0].coarse_value,
                    e[1].value - e[0].value,
                ),
                3.0 * PI * PI / (d * d),
            )
        }
        Mode::Neumann => {
            let m = neumann_eig1(&p, delta)?;
            (TwoGrid::new(m.coarse_value, m.value), PI * PI / (d * d))
        }
    };
    Ok(SweepEntry {
        param: t,
        width: w,
        diameter: d,
        delta,
        value,
        floor,
        excess: value.extrapolated - floor,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub family: String,
    pub mode: Mode,
    /// Sorted by parameter.
    pub entries: Vec<SweepEntry>,
    /// Least-squares slope and intercept of `log excess` against `log w`.
    pub slope: f64,
    pub intercept: f64,
    /// Entries whose excess did not clear three error estimates, left out of the fit.
    pub excluded: Vec<f64>,
    /// Smallest `excess · D⁸/w⁶` (Dirichlet) or `excess / w²` (Neumann).
    pub min_implied_constant: f64,
    /// Set only for families with a known exponent.
    pub expected_slope: Option<f64>,
    pub pass: bool,
}

/// Fits the sweep. Only rectangles carry an asserted slope.
pub fn fit_sweep(family: Family, mode: Mode, mut entries: Vec<SweepEntry>) -> Result<SweepReport> {
    entries.sort_by(|a, b| a.param.total_cmp(&b.param));
    let (used, excluded): (Vec<&SweepEntry>, Vec<&SweepEntry>) = entries
        .iter()
        .partition(|e| e.excess > 3.0 * e.value.error_estimate && e.excess > 0.0);
    if used.len() < MIN_FIT_POINTS {
        return Err(GapError::FitUnderdetermined {
            needed: MIN_FIT_POINTS,
            got: used.len(),
        });
    }
    let xs: Vec<f64> = used.iter().map(|e| e.width.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|e| e.excess.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(GapError::FitUnderdetermined {
            needed: MIN_FIT_POINTS,
            got: 1,
        });
    }
    let slope = sxy / sxx;
    let implied = |e: &SweepEntry| match mode {
        Mode::Dirichlet => e.excess * e.diameter.powi(8) / e.width.powi(6),
        Mode::Neumann => e.excess / (e.width * e.width),
    };
    let min_implied_constant = entries.iter().map(implied).fold(f64::INFINITY, f64::min);
    let expected_slope = (family == Family::Rects).then_some(RECT_SLOPE);
    let pass = expected_slope.map_or(true, |s| (slope - s).abs() <= RECT_SLOPE_TOL);
    Ok(SweepReport {
        family: family.to_string(),
        mode,
        excluded: excluded.iter().map(|e| e.param).collect(),
        entries,
        slope,
        intercept: my - slope * mx,
        min_implied_constant,
        expected_slope,
        pass,
    })
}

/// Sequential sweep over `params`.
pub fn exponent_sweep(
    family: Family,
    params: &[f64],
    mode: Mode,
    cells_across: f64,
) -> Result<SweepReport> {
    if params.len() < MIN_FIT_POINTS {
        return Err(GapError::FitUnderdetermined {
            needed: MIN_FIT_POINTS,
            got: params.len(),
        });
    }
    let entries = params
        .iter()
        .map(|&t| sweep_member(family, t, mode, cells_across))
        .collect::<Result<Vec<_>>>()?;
    fit_sweep(family, mode, entries)
}

#[derive(Clone, Debug, Serialize)]
pub struct SchrodingerReport {
    pub delta_v: f64,
    pub eps: f64,
    pub grid_delta: f64,
    pub lambda1: TwoGrid,
    pub lambda2: TwoGrid,
    pub gap: TwoGrid,
    /// `3π²/4`, the floor for the diamond of diameter 2.
    pub floor: f64,
    /// `π²/(1 − ε)² − π²/4`, the gap bound of the limiting strip.
    pub strip_upper: f64,
    pub within_bracket: bool,
}

/// Gap of `−Δ + (1/δ)(|y| − ε)⁺` on the diamond `|x| + |y| < 1`.
/// `δ = ∞` or `ε ≥ 1` give the plain diamond.
pub fn schrodinger_counterexample(
    delta_v: f64,
    eps: f64,
    grid_delta: f64,
) -> Result<SchrodingerReport> {
    if !(delta_v > 0.0) || !(eps > 0.0) {
        return Err(GapError::InvalidInput("δ and ε must be positive".into()));
    }
    let p = shapes::diamond();
    let v = move |x: Vec2| (x.y.abs() - eps).max(0.0) / delta_v;
    let active = delta_v.is_finite() && eps < 1.0;
    let pot: Option<&dyn Fn(Vec2) -> f64> = if active { Some(&v) } else { None };
    let e = dirichlet_eigs_with_potential(&p, 2, grid_delta, pot)?;
    let gap = TwoGrid::new(
        e[1].coarse_value - e[0].coarse_value,
        e[1].value - e[0].value,
    );
    let floor = 3.0 * PI * PI / 4.0;
    let strip_upper = if eps < 1.0 {
        PI * PI / (1.0 - eps).powi(2) - PI * PI / 4.0
    } else {
        f64::INFINITY
    };
    Ok(SchrodingerReport {
        delta_v,
        eps,
        grid_delta,
        lambda1: TwoGrid::new(e[0].coarse_value, e[0].value),
        lambda2: TwoGrid::new(e[1].coarse_value, e[1].value),
        within_bracket: gap.extrapolated > floor && gap.extrapolated < strip_upper,
        gap,
        floor,
        strip_upper,
    })
}
