use super::{cross, Chord, Vec2, EPS_GEOM};
use crate::error::{GapError, Result};

/// Convex polygon with counterclockwise vertices and no collinear triples.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
    scale: f64,
}

impl ConvexPolygon {
    /// Validates a counterclockwise vertex list.
    ///
    /// Repeated points and collinear triples are removed first, so vertices
    /// produced by clipping can be passed straight in.
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(GapError::InvalidPolygon("non-finite coordinate".into()));
        }
        let scale = bbox_diag(&points);
        if !(scale > 0.0) {
            return Err(GapError::DegenerateDomain("all vertices coincide".into()));
        }
        let vertices = simplify(points, scale);
        if vertices.len() < 3 {
            return Err(GapError::DegenerateDomain(
                "fewer than 3 distinct vertices".into(),
            ));
        }
        let area = shoelace(&vertices);
        if area.abs() < EPS_GEOM * scale * scale {
            return Err(GapError::DegenerateDomain(format!(
                "area {area:e} below tolerance"
            )));
        }
        if area < 0.0 {
            return Err(GapError::InvalidPolygon("vertices are clockwise".into()));
        }
        let n = vertices.len();
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            if cross(e0, e1) <= -EPS_GEOM * scale * scale {
                return Err(GapError::InvalidPolygon(format!(
                    "reflex vertex {}",
                    (i + 1) % n
                )));
            }
        }
        // A star-shaped winding can pass the local test; total turning must be 2π.
        let turning: f64 = (0..n)
            .map(|i| {
                let e0 = vertices[(i + 1) % n] - vertices[i];
                let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                cross(e0, e1).atan2(e0.dot(&e1))
            })
            .sum();
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GapError::InvalidPolygon(
                "self-intersecting vertex list".into(),
            ));
        }
        Ok(ConvexPolygon { vertices, scale })
    }

    pub fn from_coords(coords: &[[f64; 2]]) -> Result<Self> {
        Self::new(coords.iter().map(|c| Vec2::new(c[0], c[1])).collect())
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn coords(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|v| [v.x, v.y]).collect()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Diagonal of the bounding box; the length unit of every tolerance.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn centroid(&self) -> Vec2 {
        let n = self.vertices.len();
        let o = self.vertices[0];
        let mut c = Vec2::zeros();
        let mut a2 = 0.0;
        for i in 0..n {
            let p = self.vertices[i] - o;
            let q = self.vertices[(i + 1) % n] - o;
            let w = cross(p, q);
            a2 += w;
            c += (p + q) * w;
        }
        o + c / (3.0 * a2)
    }

    /// Iterator over directed edges `(v_i, v_{i+1})`.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Signed distance to the boundary, positive inside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        let mut inside = f64::INFINITY;
        for (a, b) in self.edges() {
            let e = b - a;
            inside = inside.min(cross(e, p - a) / e.norm());
        }
        if inside >= 0.0 {
            return inside;
        }
        let mut d = f64::INFINITY;
        for (a, b) in self.edges() {
            d = d.min(point_segment_distance(p, a, b));
        }
        -d
    }

    /// Closed-set membership with tolerance `EPS_GEOM` in the polygon's scale.
    pub fn contains(&self, p: Vec2) -> bool {
        self.edges()
            .all(|(a, b)| cross(b - a, p - a) / (b - a).norm() >= -EPS_GEOM * self.scale)
    }

    /// Open-set membership: strictly inside every edge line.
    pub fn contains_strict(&self, p: Vec2) -> bool {
        self.edges().all(|(a, b)| cross(b - a, p - a) > 0.0)
    }

    /// Range of `dir · v` over the vertices.
    pub fn projection_range(&self, dir: Vec2) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                let s = dir.dot(v);
                (lo.min(s), hi.max(s))
            })
    }

    /// Length of the section `{p ∈ P : dir · p = x}`; zero outside the projection range.
    pub fn section_profile(&self, dir: Vec2, x: f64) -> f64 {
        self.section(dir, x).map_or(0.0, |(lo, hi)| hi - lo)
    }

    /// Section `{p : dir · p = x}` as an interval of `perp · p`, `perp` being `dir`
    /// rotated by +π/2.
    pub fn section(&self, dir: Vec2, x: f64) -> Option<(f64, f64)> {
        let perp = Vec2::new(-dir.y, dir.x);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in self.edges() {
            let sa = dir.dot(&a) - x;
            let sb = dir.dot(&b) - x;
            if (sa <= 0.0 && sb >= 0.0) || (sa >= 0.0 && sb <= 0.0) {
                let ts = if sa == sb {
                    [perp.dot(&a), perp.dot(&b)]
                } else {
                    let t = sa / (sa - sb);
                    let w = perp.dot(&(a + (b - a) * t));
                    [w, w]
                };
                for t in ts {
                    lo = lo.min(t);
                    hi = hi.max(t);
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Minimal distance between parallel supporting lines, with the unit normal
    /// of the edge realizing it.
    pub fn width_with_direction(&self) -> (f64, Vec2) {
        let mut best = (f64::INFINITY, Vec2::x());
        for (a, b) in self.edges() {
            let e = b - a;
            let n = Vec2::new(e.y, -e.x) / e.norm();
            let (lo, hi) = self.projection_range(n);
            if hi - lo < best.0 {
                best = (hi - lo, n);
            }
        }
        best
    }

    pub fn width(&self) -> f64 {
        self.width_with_direction().0
    }

    pub fn diameter(&self) -> Chord {
        super::calipers::diameter(self)
    }

    /// Maximal section length orthogonal to `chord`, which must lie in the polygon.
    pub fn depth(&self, chord: &Chord) -> Result<f64> {
        if !(chord.length > 0.0) || !self.contains(chord.a) || !self.contains(chord.b) {
            return Err(GapError::InvalidChord);
        }
        let u = chord.direction();
        Ok(self
            .vertices
            .iter()
            .map(|v| self.section_profile(u, u.dot(v)))
            .fold(0.0, f64::max))
    }

    /// The polygon translated by `t` and scaled by `s` about the origin.
    pub fn transformed(&self, s: f64, t: Vec2) -> Result<Self> {
        Self::new(self.vertices.iter().map(|v| v * s + t).collect())
    }

    /// Polygon rotated by `angle` about the origin.
    pub fn rotated(&self, angle: f64) -> Result<Self> {
        let (sn, cs) = angle.sin_cos();
        Self::new(
            self.vertices
                .iter()
                .map(|v| Vec2::new(cs * v.x - sn * v.y, sn * v.x + cs * v.y))
                .collect(),
        )
    }
}

pub(crate) fn shoelace(v: &[Vec2]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    let o = v[0];
    let mut a = 0.0;
    for i in 1..n - 1 {
        a += cross(v[i] - o, v[i + 1] - o);
    }
    0.5 * a
}

fn bbox_diag(points: &[Vec2]) -> f64 {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (hi - lo).norm()
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let e = b - a;
    let t = ((p - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
    (p - (a + e * t)).norm()
}

/// Drops repeated points and vertices lying on the segment of their neighbours.
fn simplify(mut pts: Vec<Vec2>, scale: f64) -> Vec<Vec2> {
    let dup = 1e-12 * scale;
    let col = 1e-13 * scale * scale;
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let mut removed = false;
        for i in 0..n {
            let prev = pts[(i + n - 1) % n];
            let cur = pts[i];
            let next = pts[(i + 1) % n];
            let d0 = cur - prev;
            let d1 = next - cur;
            if d0.norm() <= dup || (cross(d0, d1).abs() <= col * 1.0 && d0.dot(&d1) >= 0.0) {
                pts.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return pts;
        }
    }
}

/// Counterclockwise convex hull (monotone chain) of a point cloud.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(
                    hull[hull.len() - 1] - hull[hull.len() - 2],
                    p - hull[hull.len() - 2],
                ) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}
