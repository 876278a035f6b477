use super::polygon::shoelace;
use super::{ConvexPolygon, Vec2, EPS_GEOM};
use crate::error::{GapError, Result};

/// Vertices of `P ∩ {n · p ≤ c}` (Sutherland–Hodgman against one half-plane).
pub(crate) fn clip_below(v: &[Vec2], n: Vec2, c: f64) -> Vec<Vec2> {
    let m = v.len();
    let mut out = Vec::with_capacity(m + 2);
    for i in 0..m {
        let a = v[i];
        let b = v[(i + 1) % m];
        let sa = n.dot(&a) - c;
        let sb = n.dot(&b) - c;
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Area of `P ∩ {n · p ≤ c}` without building a polygon.
pub(crate) fn area_below(v: &[Vec2], n: Vec2, c: f64) -> f64 {
    shoelace(&clip_below(v, n, c))
}

impl ConvexPolygon {
    /// Splits the polygon by the line `(cos angle, sin angle) · p = offset`.
    ///
    /// The first piece lies on the side `n · p ≤ offset`. Slivers with area
    /// below `EPS_GEOM · area(P)` count as empty.
    pub fn halfplane_cut(&self, angle: f64, offset: f64) -> Result<(ConvexPolygon, ConvexPolygon)> {
        let n = Vec2::new(angle.cos(), angle.sin());
        let total = self.area();
        let lo = clip_below(self.vertices(), n, offset);
        let hi = clip_below(self.vertices(), -n, -offset);
        let floor = EPS_GEOM * total;
        if shoelace(&lo) < floor || shoelace(&hi) < floor {
            return Err(GapError::EmptyCut);
        }
        let p1 = ConvexPolygon::new(lo).map_err(|_| GapError::EmptyCut)?;
        let p2 = ConvexPolygon::new(hi).map_err(|_| GapError::EmptyCut)?;
        Ok((p1, p2))
    }

    /// `P ∩ {n · p ≤ c}` as a polygon, or `None` when it is a sliver.
    pub fn clip(&self, n: Vec2, c: f64) -> Option<ConvexPolygon> {
        let pts = clip_below(self.vertices(), n, c);
        if shoelace(&pts) < EPS_GEOM * self.area() {
            return None;
        }
        ConvexPolygon::new(pts).ok()
    }
}
