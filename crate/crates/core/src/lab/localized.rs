use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{GapError, Result};
use crate::geometry::{Chord, ConvexPolygon, Vec2};
use crate::oned::{neumann_weighted_eig1, Interval, Weight1D};
use crate::planar::{dirichlet_eigs, GridFunction2D, EPS_WEIGHT};
use crate::sampling;

const N_CHORD: usize = 1024;
const CONCAVITY_SAMPLES: usize = 512;

#[derive(Clone, Debug, Serialize)]
pub struct LocalizedReport {
    pub chord: [[f64; 2]; 2],
    pub length: f64,
    pub diameter: f64,
    pub m: f64,
    pub mu1: f64,
    pub mu1_extrapolated: f64,
    pub error_estimate: f64,
    /// `3π²/D²`.
    pub floor: f64,
    pub excess: f64,
    pub tol: f64,
    /// `excess · D⁵ / (D − d)³`, when `d < D`.
    pub implied_c: Option<f64>,
    pub pass: bool,
}

/// `μ₁(chord, h u₁²)` against `3π²/D²`. `h` lives on `[0, |chord|]`.
pub fn verify_localized(
    p: &ConvexPolygon,
    chord: &Chord,
    h: &Weight1D,
    m: f64,
    delta: f64,
) -> Result<LocalizedReport> {
    let e = dirichlet_eigs(p, 1, delta)?;
    let rel = e[0].error_estimate / e[0].extrapolated;
    verify_localized_on(p, &e[0].function, rel, chord, h, m)
}

/// As [`verify_localized`] with a precomputed ground state whose eigenvalue
/// carries relative error `rel_error`.
pub fn verify_localized_on(
    p: &ConvexPolygon,
    u1: &GridFunction2D,
    rel_error: f64,
    chord: &Chord,
    h: &Weight1D,
    m: f64,
) -> Result<LocalizedReport> {
    if !(chord.length > 0.0) || !p.contains(chord.a) || !p.contains(chord.b) {
        return Err(GapError::InvalidChord);
    }
    if !(m >= 1.0) {
        return Err(GapError::InvalidInput(format!(
            "concavity exponent m = {m} must be at least 1"
        )));
    }
    let d = chord.length;
    let hd = Interval::new(0.0, d)?;
    if h.dom.a > 1e-12 * d || h.dom.b < d * (1.0 - 1e-12) {
        return Err(GapError::InvalidInput(
            "h must be defined on the whole chord".into(),
        ));
    }
    let defect = h.power_concavity_defect(m, CONCAVITY_SAMPLES);
    if defect > 1e-9 {
        return Err(GapError::Precondition(format!(
            "h is not (1/{m})-concave (defect {defect:e})"
        )));
    }
    let dir = chord.direction();
    let k = 4 * N_CHORD;
    let raw: Vec<f64> = (0..=k)
        .map(|i| {
            let s = d * i as f64 / k as f64;
            let u = u1.interp(chord.a + dir * s);
            h.eval(s) * u * u
        })
        .collect();
    let top = raw.iter().cloned().fold(0.0, f64::max);
    if !(top > 0.0) {
        return Err(GapError::DegenerateWeight);
    }
    let w = Weight1D::from_samples(hd, raw.iter().map(|v| v.max(EPS_WEIGHT * top)).collect())?;
    let r = neumann_weighted_eig1(hd, &w, N_CHORD)?;
    let dd = p.diameter().length;
    let floor = 3.0 * PI * PI / (dd * dd);
    let excess = r.extrapolated_value - floor;
    let tol = r.tol() + 3.0 * rel_error * floor;
    let gap_to_d = dd - d;
    Ok(LocalizedReport {
        chord: [[chord.a.x, chord.a.y], [chord.b.x, chord.b.y]],
        length: d,
        diameter: dd,
        m,
        mu1: r.value,
        mu1_extrapolated: r.extrapolated_value,
        error_estimate: r.error_estimate,
        floor,
        excess,
        tol,
        implied_c: (gap_to_d > 1e-9 * dd).then(|| excess * dd.powi(5) / gap_to_d.powi(3)),
        pass: excess >= -tol,
    })
}

/// `count` seeded chords of `p`: even draws are full chords through a random
/// interior point, odd draws are segments between two random interior points.
pub fn random_chords(p: &ConvexPolygon, count: usize, seed: u64) -> Vec<Chord> {
    let mut rng = sampling::rng(seed);
    let (lo, hi) = p.bbox();
    let point = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let q = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if p.signed_distance(q) > 1e-6 * p.scale() {
            return q;
        }
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = point(&mut rng);
        let chord = if out.len() % 2 == 0 {
            let t: f64 = rng.gen_range(0.0..PI);
            let dir = Vec2::new(t.cos(), t.sin());
            let nrm = Vec2::new(dir.y, -dir.x);
            match p.section(nrm, nrm.dot(&a)) {
                Some((s0, s1)) => {
                    let base = a - dir * dir.dot(&a);
                    Chord::new(base + dir * s0, base + dir * s1)
                }
                None => continue,
            }
        } else {
            Chord::new(a, point(&mut rng))
        };
        if chord.length > 1e-3 * p.scale() {
            out.push(chord);
        }
    }
    out
}
