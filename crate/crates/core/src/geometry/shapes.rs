//! Named domain generators.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{convex_hull, ConvexPolygon, Vec2};
use crate::error::{GapError, Result};

/// Vertex count of the polygonal disk.
pub const DISK_VERTICES: usize = 256;

pub fn unit_square() -> ConvexPolygon {
    rect(1.0, 1.0)
}

/// `(0, d) × (0, eps)`.
pub fn rect(d: f64, eps: f64) -> ConvexPolygon {
    ConvexPolygon::from_coords(&[[0.0, 0.0], [d, 0.0], [d, eps], [0.0, eps]])
        .expect("positive side lengths")
}

/// Regular `k`-gon of circumradius 1 centred at the origin, first vertex on the x-axis.
pub fn regular_ngon(k: usize) -> ConvexPolygon {
    let pts = (0..k)
        .map(|i| {
            let t = TAU * i as f64 / k as f64;
            Vec2::new(t.cos(), t.sin())
        })
        .collect();
    ConvexPolygon::new(pts).expect("k >= 3")
}

pub fn disk() -> ConvexPolygon {
    regular_ngon(DISK_VERTICES)
}

/// Equilateral triangle with side 1 and base on the x-axis.
pub fn equilateral_triangle() -> ConvexPolygon {
    ConvexPolygon::from_coords(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.75f64.sqrt()]]).unwrap()
}

/// `|x| + |y| < 1`.
pub fn diamond() -> ConvexPolygon {
    ConvexPolygon::from_coords(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]).unwrap()
}

/// Unit-radius circular sector of opening `angle ≤ π`, apex at the origin,
/// symmetric about the x-axis.
pub fn sector(angle: f64) -> Result<ConvexPolygon> {
    if !(angle > 0.0 && angle <= PI) {
        return Err(GapError::InvalidInput(format!(
            "sector angle {angle} not in (0, π]"
        )));
    }
    let segs = ((DISK_VERTICES as f64 * angle / TAU).ceil() as usize).max(8);
    let mut pts = Vec::with_capacity(segs + 2);
    if angle < PI {
        pts.push(Vec2::zeros());
    }
    for i in 0..=segs {
        let t = -0.5 * angle + angle * i as f64 / segs as f64;
        pts.push(Vec2::new(t.cos(), t.sin()));
    }
    ConvexPolygon::new(pts)
}

/// Random convex polygon: `k` jittered points on a randomly rotated, perturbed
/// ellipse with semi-axes `1` and `b ∈ [0.35, 1]`, then their convex hull.
pub fn random_polygon(k: usize, seed: u64) -> Result<ConvexPolygon> {
    if k < 3 {
        return Err(GapError::InvalidInput("random polygon needs k >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = rng.gen_range(0.35..1.0);
    let rot = rng.gen_range(0.0..PI);
    let (sr, cr) = f64::sin_cos(rot);
    let pts: Vec<Vec2> = (0..k)
        .map(|i| {
            let t = TAU * (i as f64 + rng.gen_range(0.0..0.6)) / k as f64;
            let r = 1.0 + rng.gen_range(-0.1..0.1);
            let (x, y) = (r * t.cos(), r * b * t.sin());
            Vec2::new(cr * x - sr * y, sr * x + cr * y)
        })
        .collect();
    ConvexPolygon::new(convex_hull(&pts))
}

/// Textual domain description accepted by the CLI and the harness.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    Square,
    Rect { d: f64, eps: f64 },
    Ngon(usize),
    Disk,
    Triangle,
    Diamond,
    Sector(f64),
    Random { k: usize, seed: u64 },
}

impl DomainSpec {
    pub fn build(&self) -> Result<ConvexPolygon> {
        Ok(match *self {
            DomainSpec::Square => unit_square(),
            DomainSpec::Rect { d, eps } => {
                if !(d > 0.0 && eps > 0.0) {
                    return Err(GapError::InvalidInput("rect sides must be positive".into()));
                }
                rect(d, eps)
            }
            DomainSpec::Ngon(k) => {
                if k < 3 {
                    return Err(GapError::InvalidInput("ngon needs k >= 3".into()));
                }
                regular_ngon(k)
            }
            DomainSpec::Disk => disk(),
            DomainSpec::Triangle => equilateral_triangle(),
            DomainSpec::Diamond => diamond(),
            DomainSpec::Sector(a) => sector(a)?,
            DomainSpec::Random { k, seed } => random_polygon(k, seed)?,
        })
    }
}

impl FromStr for DomainSpec {
    type Err = GapError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || GapError::InvalidInput(format!("unrecognised domain spec `{s}`"));
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        let int = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["square"] => Ok(DomainSpec::Square),
            ["disk"] => Ok(DomainSpec::Disk),
            ["triangle"] => Ok(DomainSpec::Triangle),
            ["diamond"] => Ok(DomainSpec::Diamond),
            ["rect", d, e] => Ok(DomainSpec::Rect {
                d: num(d)?,
                eps: num(e)?,
            }),
            ["ngon", k] => Ok(DomainSpec::Ngon(int(k)? as usize)),
            ["sector", a] => Ok(DomainSpec::Sector(num(a)?)),
            ["random", k, seed] => Ok(DomainSpec::Random {
                k: int(k)? as usize,
                seed: int(seed)?,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::Square => write!(f, "square"),
            DomainSpec::Rect { d, eps } => write!(f, "rect:{d}:{eps}"),
            DomainSpec::Ngon(k) => write!(f, "ngon:{k}"),
            DomainSpec::Disk => write!(f, "disk"),
            DomainSpec::Triangle => write!(f, "triangle"),
            DomainSpec::Diamond => write!(f, "diamond"),
            DomainSpec::Sector(a) => write!(f, "sector:{a}"),
            DomainSpec::Random { k, seed } => write!(f, "random:{k}:{seed}"),
        }
    }
}
