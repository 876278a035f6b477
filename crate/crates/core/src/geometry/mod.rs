//! Convex planar geometry on counterclockwise polygons.

mod calipers;
mod cut;
mod john;
mod polygon;
pub mod shapes;

pub(crate) use cut::{area_below, clip_below};
pub use john::john_ellipse;
pub(crate) use polygon::shoelace;
pub use polygon::{convex_hull, ConvexPolygon};
pub use shapes::DomainSpec;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

pub type Vec2 = Vector2<f64>;

/// Relative tolerance of all geometric predicates, in units of the polygon's
/// own length scale.
pub const EPS_GEOM: f64 = 1e-9;

/// Relative tolerance for the John ellipse containment checks.
pub const EPS_JOHN: f64 = 1e-6;

/// Segment with both endpoints in a closed polygon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chord {
    pub a: Vec2,
    pub b: Vec2,
    pub length: f64,
}

impl Chord {
    pub fn new(a: Vec2, b: Vec2) -> Self {
        Chord {
            a,
            b,
            length: (b - a).norm(),
        }
    }

    /// Unit vector from `a` to `b`.
    pub fn direction(&self) -> Vec2 {
        (self.b - self.a) / self.length
    }

    pub fn midpoint(&self) -> Vec2 {
        0.5 * (self.a + self.b)
    }

    /// Point at arc-length parameter `s ∈ [0, length]`.
    pub fn point_at(&self, s: f64) -> Vec2 {
        self.a + self.direction() * s
    }
}

/// Ellipse `{ c + R diag(a1, a2) u : |u| ≤ 1 }` with `R` the rotation by `orientation`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: [f64; 2],
    pub semi_axes: (f64, f64),
    pub orientation: f64,
}

impl Ellipse {
    fn frame(&self) -> (Vec2, Vec2) {
        let (s, c) = self.orientation.sin_cos();
        (Vec2::new(c, s), Vec2::new(-s, c))
    }

    /// Gauge of `p` with respect to the ellipse: `< 1` inside, `1` on the boundary.
    pub fn gauge(&self, p: Vec2) -> f64 {
        let (e1, e2) = self.frame();
        let d = p - Vec2::new(self.center[0], self.center[1]);
        let x = d.dot(&e1) / self.semi_axes.0;
        let y = d.dot(&e2) / self.semi_axes.1;
        (x * x + y * y).sqrt()
    }

    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        let (e1, e2) = self.frame();
        Vec2::new(self.center[0], self.center[1])
            + e1 * (self.semi_axes.0 * theta.cos())
            + e2 * (self.semi_axes.1 * theta.sin())
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.semi_axes.0 * self.semi_axes.1
    }
}

#[inline]
pub(crate) fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}
