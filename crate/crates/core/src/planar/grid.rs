use std::sync::Arc;

use serde::Serialize;

use crate::error::{GapError, Result};
use crate::geometry::{ConvexPolygon, Vec2};

/// Cells spanning the width direction required of a user-supplied grid.
pub const MIN_CELLS_ACROSS: f64 = 40.0;

/// Uniform grid fitted to the bounding box of a polygon, restricted to the
/// cells whose centers lie strictly inside.
#[derive(Clone, Debug)]
pub struct Grid2D {
    pub origin: Vec2,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
    /// `(i, j)` of every masked cell, ordered with the longer axis outermost.
    pub cells: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    /// Distance from each masked center to the boundary.
    pub dist: Vec<f64>,
    pub polygon: ConvexPolygon,
}

impl Grid2D {
    /// Grid with spacing at most `delta`; fails when fewer than
    /// [`MIN_CELLS_ACROSS`] cells span the width.
    pub fn new(p: &ConvexPolygon, delta: f64) -> Result<Self> {
        let w = p.width();
        if !(delta > 0.0) || w / delta < MIN_CELLS_ACROSS - 1e-9 {
            return Err(GapError::ResolutionError(format!(
                "spacing {delta} gives {:.1} cells across width {w}; need {MIN_CELLS_ACROSS}",
                w / delta
            )));
        }
        Self::build(p, delta)
    }

    /// Same as [`Grid2D::new`] without the resolution check.
    /// Cell counts per axis are even so that [`Grid2D::coarsened`] doubles
    /// the spacing exactly.
    pub fn build(p: &ConvexPolygon, delta: f64) -> Result<Self> {
        let (lo, hi) = p.bbox();
        let span = hi - lo;
        let nx = 2 * ((span.x / (2.0 * delta)).ceil() as usize).max(2);
        let ny = 2 * ((span.y / (2.0 * delta)).ceil() as usize).max(2);
        Self::with_counts(p, nx, ny)
    }

    fn with_counts(p: &ConvexPolygon, nx: usize, ny: usize) -> Result<Self> {
        let (lo, hi) = p.bbox();
        let span = hi - lo;
        let (hx, hy) = (span.x / nx as f64, span.y / ny as f64);
        let center = |i: usize, j: usize| {
            Vec2::new(lo.x + (i as f64 + 0.5) * hx, lo.y + (j as f64 + 0.5) * hy)
        };
        let mut order = Vec::with_capacity(nx * ny);
        if nx >= ny {
            for i in 0..nx {
                for j in 0..ny {
                    order.push((i, j));
                }
            }
        } else {
            for j in 0..ny {
                for i in 0..nx {
                    order.push((i, j));
                }
            }
        }
        let mut cells = Vec::new();
        let mut dist = Vec::new();
        let mut index = vec![None; nx * ny];
        for (i, j) in order {
            let d = p.signed_distance(center(i, j));
            if d > 1e-12 * p.scale() {
                index[i * ny + j] = Some(cells.len());
                cells.push((i, j));
                dist.push(d);
            }
        }
        if cells.len() < 4 {
            return Err(GapError::ResolutionError(format!(
                "only {} cells inside the polygon",
                cells.len()
            )));
        }
        let g = Grid2D {
            origin: lo,
            hx,
            hy,
            nx,
            ny,
            cells,
            index,
            dist,
            polygon: p.clone(),
        };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for (nb, _) in self.neighbours(c) {
                if let Some(k) = nb {
                    if !seen[k] {
                        seen[k] = true;
                        count += 1;
                        stack.push(k);
                    }
                }
            }
        }
        if count != self.len() {
            return Err(GapError::ResolutionError(
                "cell mask is not connected".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    pub fn index(&self, i: isize, j: isize) -> Option<usize> {
        if i < 0 || j < 0 || i as usize >= self.nx || j as usize >= self.ny {
            return None;
        }
        self.index[i as usize * self.ny + j as usize]
    }

    pub fn center(&self, c: usize) -> Vec2 {
        let (i, j) = self.cells[c];
        Vec2::new(
            self.origin.x + (i as f64 + 0.5) * self.hx,
            self.origin.y + (j as f64 + 0.5) * self.hy,
        )
    }

    pub fn centers(&self) -> impl Iterator<Item = Vec2> + '_ {
        (0..self.len()).map(|c| self.center(c))
    }

    /// The four axis neighbours of cell `c` as `(masked index, unit direction)`.
    pub fn neighbours(&self, c: usize) -> [(Option<usize>, Vec2); 4] {
        let (i, j) = self.cells[c];
        let (i, j) = (i as isize, j as isize);
        [
            (self.index(i + 1, j), Vec2::new(1.0, 0.0)),
            (self.index(i - 1, j), Vec2::new(-1.0, 0.0)),
            (self.index(i, j + 1), Vec2::new(0.0, 1.0)),
            (self.index(i, j - 1), Vec2::new(0.0, -1.0)),
        ]
    }

    /// Distance from `p` to the boundary along the ray `p + t·dir`.
    pub fn ray_exit(&self, p: Vec2, dir: Vec2) -> f64 {
        let mut t = f64::INFINITY;
        for (a, b) in self.polygon.edges() {
            let e = b - a;
            let n = Vec2::new(e.y, -e.x) / e.norm();
            let nd = n.dot(&dir);
            if nd > 0.0 {
                t = t.min(n.dot(&(a - p)) / nd);
            }
        }
        t.max(0.0)
    }

    /// Grid with twice the spacing on the same polygon.
    pub fn coarsened(&self) -> Result<Self> {
        Self::with_counts(&self.polygon, self.nx / 2, self.ny / 2)
    }
}

/// Values on the masked cells of a grid.
#[derive(Clone, Debug)]
pub struct GridFunction2D {
    pub grid: Arc<Grid2D>,
    pub values: Vec<f64>,
    /// Values outside the mask: zero for Dirichlet functions, nearest-cell
    /// extension otherwise.
    pub zero_outside: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellSample {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

impl GridFunction2D {
    pub fn new(grid: Arc<Grid2D>, values: Vec<f64>, zero_outside: bool) -> Self {
        GridFunction2D {
            grid,
            values,
            zero_outside,
        }
    }

    /// `∫ f` by the midpoint rule over masked cells.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFunction2D {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            zero_outside: self.zero_outside,
        }
    }

    /// `∫ f g` by the midpoint rule.
    pub fn dot(&self, other: &GridFunction2D) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.cell_area()
    }

    /// Bilinear interpolation between cell centers.
    pub fn interp(&self, p: Vec2) -> f64 {
        let g = &self.grid;
        let fx = (p.x - g.origin.x) / g.hx - 0.5;
        let fy = (p.y - g.origin.y) / g.hy - 0.5;
        let (i0, j0) = (fx.floor() as isize, fy.floor() as isize);
        let (tx, ty) = (fx - i0 as f64, fy - j0 as f64);
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for (di, dj, w) in [
            (0, 0, (1.0 - tx) * (1.0 - ty)),
            (1, 0, tx * (1.0 - ty)),
            (0, 1, (1.0 - tx) * ty),
            (1, 1, tx * ty),
        ] {
            if w == 0.0 {
                continue;
            }
            match g.index(i0 + di, j0 + dj) {
                Some(c) => {
                    acc += w * self.values[c];
                    wsum += w;
                }
                None if self.zero_outside => wsum += w,
                None => {}
            }
        }
        if wsum > 0.0 {
            acc / wsum
        } else {
            self.nearest(p)
        }
    }

    fn nearest(&self, p: Vec2) -> f64 {
        if self.zero_outside && !self.grid.polygon.contains(p) {
            return 0.0;
        }
        let mut best = (f64::INFINITY, 0.0);
        for (c, q) in self.grid.centers().enumerate() {
            let d = (q - p).norm_squared();
            if d < best.0 {
                best = (d, self.values[c]);
            }
        }
        best.1
    }

    pub fn samples(&self) -> Vec<CellSample> {
        self.grid
            .centers()
            .zip(&self.values)
            .map(|(p, &v)| CellSample {
                x: p.x,
                y: p.y,
                value: v,
            })
            .collect()
    }
}
