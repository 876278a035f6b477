//! SVG overlays and PGM heatmaps.

use std::fmt::Write;

use gaplab_core::geometry::{Chord, ConvexPolygon, Vec2};
use gaplab_core::planar::GridFunction2D;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 12.0;

/// Maps domain coordinates into a square canvas with `y` pointing up.
struct Frame {
    lo: Vec2,
    scale: f64,
}

impl Frame {
    fn new(p: &ConvexPolygon) -> Self {
        let (lo, hi) = p.bbox();
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        Frame {
            lo,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, v: Vec2) -> (f64, f64) {
        (
            MARGIN + (v.x - self.lo.x) * self.scale,
            SIZE - MARGIN - (v.y - self.lo.y) * self.scale,
        )
    }

    fn points(&self, p: &ConvexPolygon) -> String {
        p.vertices()
            .iter()
            .map(|v| {
                let (x, y) = self.map(*v);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Layers drawn over a domain outline.
#[derive(Default)]
pub struct Overlay<'a> {
    pub heat: Option<&'a GridFunction2D>,
    pub cells: Vec<&'a ConvexPolygon>,
    pub chords: Vec<Chord>,
}

fn grey(t: f64) -> u8 {
    (255.0 * (1.0 - t.clamp(0.0, 1.0))).round() as u8
}

pub fn svg(domain: &ConvexPolygon, layers: &Overlay) -> String {
    let f = Frame::new(domain);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    if let Some(u) = layers.heat {
        let top = u.max_abs().max(f64::MIN_POSITIVE);
        let g = &u.grid;
        let (w, h) = (g.hx * f.scale, g.hy * f.scale);
        for (c, v) in u.values.iter().enumerate() {
            let m = g.center(c);
            let (x, y) = f.map(Vec2::new(m.x - 0.5 * g.hx, m.y + 0.5 * g.hy));
            let k = grey(v.abs() / top);
            writeln!(s, r#"<rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{h:.3}" fill="rgb({k},{k},255)"/>"#).unwrap();
        }
    }
    for cell in &layers.cells {
        writeln!(
            s,
            r#"<polygon points="{}" fill="none" stroke="firebrick" stroke-width="1"/>"#,
            f.points(cell)
        )
        .unwrap();
    }
    for c in &layers.chords {
        let ((x1, y1), (x2, y2)) = (f.map(c.a), f.map(c.b));
        writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="darkgreen" stroke-width="1"/>"#).unwrap();
    }
    writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        f.points(domain)
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

/// Plain (ASCII) PGM of `|u|` on the bounding grid, rows top to bottom.
pub fn pgm(u: &GridFunction2D) -> String {
    let g = &u.grid;
    let top = u.max_abs().max(f64::MIN_POSITIVE);
    let mut img = vec![0u8; g.nx * g.ny];
    for (c, &(i, j)) in g.cells.iter().enumerate() {
        img[(g.ny - 1 - j) * g.nx + i] = (255.0 * u.values[c].abs() / top).round() as u8;
    }
    let mut s = format!("P2\n{} {}\n255\n", g.nx, g.ny);
    for row in img.chunks(g.nx) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}
