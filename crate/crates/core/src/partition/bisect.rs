use std::f64::consts::PI;

use serde::Serialize;

use super::field::{totals, AngleView, Piece, ABS_UP, AREA, U2P, UP};
use crate::error::{GapError, Result};
use crate::geometry::{ConvexPolygon, Vec2};

/// Relative tolerance of every equipartition equality.
pub const EPS_PART: f64 = 1e-6;
/// Angular samples in the sign-change scan over `[0, π)`.
pub const ANGLE_SAMPLES: usize = 720;
const OFFSET_STEPS: usize = 60;
const ANGLE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PartitionKind {
    /// Equal areas.
    Measure,
    /// Equal `∫ u² p`.
    L2,
}

impl PartitionKind {
    fn index(self) -> usize {
        match self {
            PartitionKind::Measure => AREA,
            PartitionKind::L2 => U2P,
        }
    }
}

impl std::str::FromStr for PartitionKind {
    type Err = GapError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "measure" => Ok(PartitionKind::Measure),
            "l2" => Ok(PartitionKind::L2),
            _ => Err(GapError::InvalidInput(format!(
                "unknown partition kind `{s}`"
            ))),
        }
    }
}

/// One zero-mean bisection of a cell.
#[derive(Clone, Debug)]
pub(crate) struct Bisection {
    pub first: (ConvexPolygon, Vec<Piece>),
    pub second: (ConvexPolygon, Vec<Piece>),
    pub angle: f64,
    pub offset: f64,
    /// `|∫_{first} u p| / ∫ |u| p`.
    pub residual: f64,
    pub low_confidence: bool,
}

fn normal(angle: f64) -> Vec2 {
    Vec2::new(angle.cos(), angle.sin())
}

/// Offset splitting the `kind` mass in half at `angle`, and `∫ u p` below it.
fn half_offset(pieces: &[Piece], angle: f64, kind: PartitionKind, total: f64) -> (f64, f64) {
    let view = AngleView::new(pieces, normal(angle));
    let target = 0.5 * total;
    let (mut a, mut b) = (view.min, view.max);
    let k = kind.index();
    let mut t = 0.5 * (a + b);
    let mut below = view.below(t);
    for _ in 0..OFFSET_STEPS {
        if (below[k] - target).abs() <= 1e-13 * total {
            break;
        }
        if below[k] < target {
            a = t;
        } else {
            b = t;
        }
        t = 0.5 * (a + b);
        below = view.below(t);
    }
    (t, below[UP])
}

/// Zero-mean bisection of a cell: for every direction the offset halving the
/// mass, then the first direction in scan order where `∫ u p` changes sign.
pub(crate) fn bisect_pieces(
    cell: &ConvexPolygon,
    pieces: &[Piece],
    kind: PartitionKind,
) -> Result<Bisection> {
    let tot = totals(pieces);
    let total = tot[kind.index()];
    if !(total > 0.0) {
        return Err(GapError::InvalidInput("cell carries no mass".into()));
    }
    let scale = tot[ABS_UP].max(f64::MIN_POSITIVE);
    if tot[UP].abs() > EPS_PART * scale {
        return Err(GapError::Precondition(format!(
            "∫ u p = {:.3e} is not zero relative to ∫ |u| p = {:.3e}",
            tot[UP], scale
        )));
    }
    let eval = |angle: f64| half_offset(pieces, angle, kind, total);
    let step = PI / ANGLE_SAMPLES as f64;
    let samples: Vec<(f64, f64)> = (0..=ANGLE_SAMPLES)
        .map(|i| {
            let a = i as f64 * step;
            if i == ANGLE_SAMPLES {
                // 𝓘(π) = −𝓘(0).
                (a, -eval(0.0).1)
            } else {
                (a, eval(a).1)
            }
        })
        .collect();
    let mut low_confidence = false;
    let bracket = samples
        .windows(2)
        .find(|w| w[0].1 == 0.0 || w[0].1 * w[1].1 < 0.0);
    let angle = match bracket {
        Some(w) if w[0].1 == 0.0 => w[0].0,
        Some(w) => {
            let (mut a, mut b, fa) = (w[0].0, w[1].0, w[0].1);
            while b - a > ANGLE_TOL {
                let m = 0.5 * (a + b);
                let fm = if m >= PI { -eval(m - PI).1 } else { eval(m).1 };
                if fm == 0.0 {
                    a = m;
                    b = m;
                } else if fm * fa < 0.0 {
                    b = m;
                } else {
                    a = m;
                }
            }
            0.5 * (a + b)
        }
        None => {
            low_confidence = true;
            samples
                .iter()
                .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
                .unwrap()
                .0
        }
    };
    let angle = angle % PI;
    let (offset, up) = eval(angle);
    let residual = up.abs() / scale;
    if residual > EPS_PART {
        low_confidence = true;
    }
    let n = normal(angle);
    let (p1, p2) = cell.halfplane_cut(angle, offset)?;
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for p in pieces {
        let (a, b) = p.split(n, offset);
        s1.extend(a);
        s2.extend(b);
    }
    Ok(Bisection {
        first: (p1, s1),
        second: (p2, s2),
        angle,
        offset,
        residual,
        low_confidence,
    })
}
