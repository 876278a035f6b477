use std::sync::Arc;

use crate::error::{GapError, Result};
use crate::geometry::{area_below, clip_below, shoelace, ConvexPolygon, Vec2};
use crate::planar::{Grid2D, GridFunction2D};

/// Number of integrated quantities carried by a [`Piece`].
pub(crate) const NQ: usize = 5;
pub(crate) const AREA: usize = 0;
pub(crate) const UP: usize = 1;
pub(crate) const U2P: usize = 2;
pub(crate) const G2P: usize = 3;
pub(crate) const ABS_UP: usize = 4;

/// A grid cell clipped to a partition cell, with its integrals of
/// `1, u p, u² p, |∇u|² p, |u| p`.
#[derive(Clone, Debug)]
pub(crate) struct Piece {
    pub verts: Vec<Vec2>,
    pub area: f64,
    pub q: [f64; NQ],
}

impl Piece {
    fn scaled(&self, verts: Vec<Vec2>) -> Option<Piece> {
        let area = shoelace(&verts);
        if !(area > 0.0) {
            return None;
        }
        let f = area / self.area;
        let mut q = self.q;
        q.iter_mut().for_each(|x| *x *= f);
        Some(Piece { verts, area, q })
    }

    /// The parts on `n · x ≤ t` and `n · x ≥ t`.
    pub fn split(&self, n: Vec2, t: f64) -> (Option<Piece>, Option<Piece>) {
        let (lo, hi) = self.range(n);
        if hi <= t {
            return (Some(self.clone()), None);
        }
        if lo >= t {
            return (None, Some(self.clone()));
        }
        (
            self.scaled(clip_below(&self.verts, n, t)),
            self.scaled(clip_below(&self.verts, -n, -t)),
        )
    }

    pub fn range(&self, n: Vec2) -> (f64, f64) {
        self.verts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                let s = n.dot(v);
                (a.min(s), b.max(s))
            })
    }
}

/// Piecewise-constant `u`, `p` and `|∇u|²` on the grid cells of a solve, the
/// quadrature with respect to which partitions are exact.
#[derive(Clone, Debug)]
pub struct WeightedField {
    pub grid: Arc<Grid2D>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub grad2: Vec<f64>,
}

impl WeightedField {
    /// `p` holds one value per masked cell of `u`'s grid.
    pub fn new(u: &GridFunction2D, p: Vec<f64>) -> Result<Self> {
        let g = u.grid.clone();
        if p.len() != g.len() {
            return Err(GapError::InvalidInput(
                "weight and function live on different grids".into(),
            ));
        }
        if p.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(GapError::InvalidInput(
                "weight must be nonnegative and finite".into(),
            ));
        }
        let grad2 = (0..g.len())
            .map(|c| {
                let nb = g.neighbours(c);
                let d = |fwd: Option<usize>, bwd: Option<usize>, h: f64| match (fwd, bwd) {
                    (Some(a), Some(b)) => (u.values[a] - u.values[b]) / (2.0 * h),
                    (Some(a), None) => (u.values[a] - u.values[c]) / h,
                    (None, Some(b)) => (u.values[c] - u.values[b]) / h,
                    (None, None) => 0.0,
                };
                let gx = d(nb[0].0, nb[1].0, g.hx);
                let gy = d(nb[2].0, nb[3].0, g.hy);
                gx * gx + gy * gy
            })
            .collect();
        Ok(WeightedField {
            grid: g,
            u: u.values.clone(),
            p,
            grad2,
        })
    }

    /// The field with `u` shifted so that `∫_poly u p = 0` in the clipped quadrature.
    pub fn with_zero_mean(&self, poly: &ConvexPolygon) -> Result<Self> {
        let (mut up, mut pp) = (0.0, 0.0);
        for (c, _, area) in self.clipped(poly) {
            up += self.u[c] * self.p[c] * area;
            pp += self.p[c] * area;
        }
        if !(pp > 0.0) {
            return Err(GapError::DegenerateWeight);
        }
        let mut out = self.clone();
        out.u.iter_mut().for_each(|v| *v -= up / pp);
        Ok(out)
    }

    /// `(cell, clipped vertices, clipped area)` for every cell meeting `poly`.
    fn clipped(&self, poly: &ConvexPolygon) -> Vec<(usize, Vec<Vec2>, f64)> {
        let g = &self.grid;
        let mut out = Vec::with_capacity(g.len());
        let edges: Vec<(Vec2, f64)> = poly
            .edges()
            .map(|(a, b)| {
                let e = b - a;
                let n = Vec2::new(e.y, -e.x) / e.norm();
                (n, n.dot(&a))
            })
            .collect();
        for c in 0..g.len() {
            let m = g.center(c);
            let (hx, hy) = (0.5 * g.hx, 0.5 * g.hy);
            let mut v = vec![
                Vec2::new(m.x - hx, m.y - hy),
                Vec2::new(m.x + hx, m.y - hy),
                Vec2::new(m.x + hx, m.y + hy),
                Vec2::new(m.x - hx, m.y + hy),
            ];
            for &(n, off) in &edges {
                if v.is_empty() {
                    break;
                }
                v = clip_below(&v, n, off);
            }
            let area = shoelace(&v);
            if area > 0.0 {
                out.push((c, v, area));
            }
        }
        out
    }

    /// Grid cells clipped to `poly`.
    pub(crate) fn pieces(&self, poly: &ConvexPolygon) -> Vec<Piece> {
        self.clipped(poly)
            .into_iter()
            .map(|(c, verts, area)| {
                let (u, p) = (self.u[c], self.p[c]);
                Piece {
                    verts,
                    area,
                    q: [
                        area,
                        u * p * area,
                        u * u * p * area,
                        self.grad2[c] * p * area,
                        u.abs() * p * area,
                    ],
                }
            })
            .collect()
    }
}

pub(crate) fn totals(pieces: &[Piece]) -> [f64; NQ] {
    let mut t = [0.0; NQ];
    for p in pieces {
        for k in 0..NQ {
            t[k] += p.q[k];
        }
    }
    t
}

/// Pieces sorted by the top of their projection on `n`, with prefix sums.
pub(crate) struct AngleView<'a> {
    pieces: &'a [Piece],
    n: Vec2,
    order: Vec<usize>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    prefix: Vec<[f64; NQ]>,
    max_width: f64,
    pub min: f64,
    pub max: f64,
}

impl<'a> AngleView<'a> {
    pub fn new(pieces: &'a [Piece], n: Vec2) -> Self {
        let ranges: Vec<(f64, f64)> = pieces.iter().map(|p| p.range(n)).collect();
        let mut order: Vec<usize> = (0..pieces.len()).collect();
        order.sort_by(|&a, &b| ranges[a].1.total_cmp(&ranges[b].1));
        let lo: Vec<f64> = order.iter().map(|&i| ranges[i].0).collect();
        let hi: Vec<f64> = order.iter().map(|&i| ranges[i].1).collect();
        let mut prefix = Vec::with_capacity(order.len() + 1);
        let mut acc = [0.0; NQ];
        prefix.push(acc);
        for &i in &order {
            for k in 0..NQ {
                acc[k] += pieces[i].q[k];
            }
            prefix.push(acc);
        }
        let max_width = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
        let min = lo.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = hi.last().copied().unwrap_or(0.0);
        AngleView {
            pieces,
            n,
            order,
            lo,
            hi,
            prefix,
            max_width,
            min,
            max,
        }
    }

    /// Integrals over `{n · x ≤ t}`.
    pub fn below(&self, t: f64) -> [f64; NQ] {
        let k = self.hi.partition_point(|&h| h <= t);
        let mut acc = self.prefix[k];
        for s in k..self.order.len() {
            if self.hi[s] > t + self.max_width {
                break;
            }
            if self.lo[s] < t {
                let p = &self.pieces[self.order[s]];
                let f = area_below(&p.verts, self.n, t) / p.area;
                for q in 0..NQ {
                    acc[q] += f * p.q[q];
                }
            }
        }
        acc
    }
}
