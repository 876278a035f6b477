use super::{cross, Chord, ConvexPolygon};

/// Rotating calipers over antipodal vertex pairs.
///
/// Among pairs within a relative `1e-12` of the maximal length, the
/// lexicographically first index pair wins.
pub(super) fn diameter(p: &ConvexPolygon) -> Chord {
    let v = p.vertices();
    let n = v.len();
    let mut candidates: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * n);
    let mut j = 1;
    for i in 0..n {
        let ni = (i + 1) % n;
        let e = v[ni] - v[i];
        let mut steps = 0;
        while steps < n && cross(e, v[(j + 1) % n] - v[i]) > cross(e, v[j] - v[i]) {
            j = (j + 1) % n;
            steps += 1;
        }
        for (a, b) in [(i, j), (ni, j), (i, (j + 1) % n), (ni, (j + 1) % n)] {
            if a != b {
                let (a, b) = (a.min(b), a.max(b));
                candidates.push((a, b, (v[b] - v[a]).norm()));
            }
        }
    }
    let best = candidates.iter().map(|c| c.2).fold(0.0, f64::max);
    let (a, b, _) = candidates
        .into_iter()
        .filter(|c| c.2 >= best * (1.0 - 1e-12))
        .min_by_key(|c| (c.0, c.1))
        .expect("polygon has at least three vertices");
    Chord::new(v[a], v[b])
}

/// All-pairs reference with the same tie rule.
#[cfg(test)]
pub(super) fn diameter_brute(p: &ConvexPolygon) -> Chord {
    let v = p.vertices();
    let mut best = 0.0f64;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            best = best.max((v[b] - v[a]).norm());
        }
    }
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            if (v[b] - v[a]).norm() >= best * (1.0 - 1e-12) {
                return Chord::new(v[a], v[b]);
            }
        }
    }
    unreachable!()
}
