//! Weighted measure and `L²` equipartitions of convex polygons by recursive
//! zero-mean bisection, and per-cell diagnostics.

mod bisect;
mod diagnostics;
mod field;

pub use bisect::{PartitionKind, ANGLE_SAMPLES, EPS_PART};
pub use diagnostics::{
    cell_diagnostics, mean_value_bound, section_lower_bound_check, CellDiagnostics,
    MeanValueReport, SectionReport,
};
pub use field::WeightedField;

use serde::Serialize;

use crate::error::{GapError, Result};
use crate::geometry::ConvexPolygon;
use field::{totals, Piece, ABS_UP, AREA, G2P, U2P, UP};

/// A cut `(cos α, sin α) · x = offset` made at recursion depth `depth`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Cut {
    pub angle: f64,
    pub offset: f64,
    pub depth: usize,
    pub residual: f64,
    pub low_confidence: bool,
}

/// Integrals of the field over one cell, in the grid quadrature.
#[derive(Clone, Debug, Serialize)]
pub struct CellIntegrals {
    /// Area covered by the grid quadrature.
    pub area: f64,
    pub up: f64,
    pub u2p: f64,
    pub grad2p: f64,
    pub abs_up: f64,
}

impl CellIntegrals {
    fn from_pieces(p: &[Piece]) -> Self {
        let t = totals(p);
        CellIntegrals {
            area: t[AREA],
            up: t[UP],
            u2p: t[U2P],
            grad2p: t[G2P],
            abs_up: t[ABS_UP],
        }
    }

    /// `∫|∇u|²p / ∫u²p`.
    pub fn rayleigh(&self) -> f64 {
        self.grad2p / self.u2p
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    #[serde(serialize_with = "polygon_coords")]
    pub polygon: ConvexPolygon,
    pub integrals: CellIntegrals,
    pub low_confidence: bool,
}

fn polygon_coords<S: serde::Serializer>(
    p: &ConvexPolygon,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    p.coords().serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct Partition {
    pub kind: PartitionKind,
    pub cells: Vec<Cell>,
    pub cuts: Vec<Cut>,
    /// Integrals over the whole domain.
    pub total: CellIntegrals,
}

impl Partition {
    /// Largest relative deviation from the defining equalities over all cells:
    /// `|∫ u p| / ∫|u| p` and the kind-specific mass against its `1/n` share.
    pub fn worst_defect(&self) -> (f64, f64) {
        let n = self.cells.len() as f64;
        let mut mean = 0.0f64;
        let mut mass = 0.0f64;
        for c in &self.cells {
            mean = mean.max(c.integrals.up.abs() / c.integrals.abs_up);
            let (got, want) = match self.kind {
                PartitionKind::Measure => (c.integrals.area, self.total.area / n),
                PartitionKind::L2 => (c.integrals.u2p, self.total.u2p / n),
            };
            mass = mass.max((got - want).abs() / want);
        }
        (mean, mass)
    }

    /// `|Q − (1/n) Σ Qᵢ| / Q` for the Rayleigh quotients `∫|∇u|²p / ∫u²p` of
    /// the domain and of the cells.
    pub fn identity_residual(&self) -> f64 {
        let global = self.total.rayleigh();
        let mean = self
            .cells
            .iter()
            .map(|c| c.integrals.rayleigh())
            .sum::<f64>()
            / self.cells.len() as f64;
        (global - mean).abs() / global
    }

    pub fn any_low_confidence(&self) -> bool {
        self.cells.iter().any(|c| c.low_confidence)
    }
}

/// Single zero-mean bisection of `poly`.
pub fn bisect_zero_mean(
    poly: &ConvexPolygon,
    field: &WeightedField,
    kind: PartitionKind,
) -> Result<Partition> {
    equipartition(poly, field, 2, kind)
}

/// Recursive zero-mean bisection into `n = 2^k` cells.
pub fn equipartition(
    poly: &ConvexPolygon,
    field: &WeightedField,
    n: usize,
    kind: PartitionKind,
) -> Result<Partition> {
    if n == 0 || !n.is_power_of_two() {
        return Err(GapError::InvalidInput(format!(
            "cell count {n} is not a power of two"
        )));
    }
    let pieces = field.pieces(poly);
    let total = CellIntegrals::from_pieces(&pieces);
    let mut cells: Vec<(ConvexPolygon, Vec<Piece>, bool)> = vec![(poly.clone(), pieces, false)];
    let mut cuts = Vec::new();
    let mut depth = 0;
    while cells.len() < n {
        let mut next = Vec::with_capacity(2 * cells.len());
        for (c, p, flag) in cells {
            let b = bisect::bisect_pieces(&c, &p, kind)?;
            cuts.push(Cut {
                angle: b.angle,
                offset: b.offset,
                depth,
                residual: b.residual,
                low_confidence: b.low_confidence,
            });
            let f = flag || b.low_confidence;
            next.push((b.first.0, b.first.1, f));
            next.push((b.second.0, b.second.1, f));
        }
        cells = next;
        depth += 1;
    }
    let cells = cells
        .into_iter()
        .map(|(polygon, p, low_confidence)| Cell {
            polygon,
            integrals: CellIntegrals::from_pieces(&p),
            low_confidence,
        })
        .collect();
    Ok(Partition {
        kind,
        cells,
        cuts,
        total,
    })
}
