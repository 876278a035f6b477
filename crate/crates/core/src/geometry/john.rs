use nalgebra::{Matrix2, SMatrix, SVector};

use super::{ConvexPolygon, Ellipse, Vec2};
use crate::error::{GapError, Result};

type V5 = SVector<f64, 5>;
type M5 = SMatrix<f64, 5, 5>;

/// Maximal-area ellipse `{B u + c : |u| ≤ 1}` inscribed in the polygon.
///
/// Barrier method on `-log det B` with constraints `|B a_i| + a_i · c ≤ b_i`,
/// one per edge, solved by damped Newton in the five unknowns of `(B, c)`.
pub fn john_ellipse(p: &ConvexPolygon) -> Result<Ellipse> {
    let c0 = p.centroid();
    let s = p.scale();
    let (normals, offsets): (Vec<Vec2>, Vec<f64>) = p
        .edges()
        .map(|(a, b)| {
            let e = b - a;
            let n = Vec2::new(e.y, -e.x) / e.norm();
            (n, n.dot(&(a - c0)) / s)
        })
        .unzip();
    let slack0 = offsets.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(slack0 > 0.0) {
        return Err(GapError::JohnSolveFailed { residual: f64::NAN });
    }
    let mut z = V5::from([0.5 * slack0, 0.0, 0.5 * slack0, 0.0, 0.0]);
    let m = normals.len() as f64;
    let mut t = 1.0;
    let mut decrement = f64::INFINITY;
    while m / t > 1e-11 {
        for _ in 0..200 {
            let (_, g, h) = objective(&z, t, &normals, &offsets)
                .ok_or(GapError::JohnSolveFailed { residual: f64::NAN })?;
            let step = match h.cholesky() {
                Some(ch) => -ch.solve(&g),
                None => {
                    return Err(GapError::JohnSolveFailed {
                        residual: decrement,
                    })
                }
            };
            decrement = (-g.dot(&step)).max(0.0);
            if decrement < 1e-20 {
                break;
            }
            let f0 = objective(&z, t, &normals, &offsets).unwrap().0;
            let mut alpha = 1.0;
            loop {
                let trial = z + step * alpha;
                if let Some((f1, _, _)) = objective(&trial, t, &normals, &offsets) {
                    if f1 <= f0 - 0.25 * alpha * decrement {
                        z = trial;
                        break;
                    }
                }
                alpha *= 0.5;
                if alpha < 1e-16 {
                    break;
                }
            }
            if alpha < 1e-16 || decrement < 1e-18 {
                break;
            }
        }
        t *= 8.0;
    }
    if !(decrement < 1e-6) {
        return Err(GapError::JohnSolveFailed {
            residual: decrement,
        });
    }
    let b = Matrix2::new(z[0], z[1], z[1], z[2]) * s;
    let eig = b.symmetric_eigen();
    let (i1, i2) = if eig.eigenvalues[0] >= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let axis = eig.eigenvectors.column(i1);
    let mut orientation = axis[1].atan2(axis[0]);
    if orientation < 0.0 {
        orientation += std::f64::consts::PI;
    }
    if orientation >= std::f64::consts::PI {
        orientation -= std::f64::consts::PI;
    }
    let center = c0 + Vec2::new(z[3], z[4]) * s;
    Ok(Ellipse {
        center: [center.x, center.y],
        semi_axes: (eig.eigenvalues[i1], eig.eigenvalues[i2]),
        orientation,
    })
}

/// Value, gradient and Hessian of `-t log det B - Σ log s_i`; `None` if infeasible.
fn objective(z: &V5, t: f64, normals: &[Vec2], offsets: &[f64]) -> Option<(f64, V5, M5)> {
    let (b11, b12, b22) = (z[0], z[1], z[2]);
    let det = b11 * b22 - b12 * b12;
    if !(det > 0.0) || !(b11 > 0.0) {
        return None;
    }
    let gd = SVector::<f64, 3>::new(b22, -2.0 * b12, b11);
    let mut hd = gd * gd.transpose() / (det * det);
    hd[(0, 2)] -= 1.0 / det;
    hd[(2, 0)] -= 1.0 / det;
    hd[(1, 1)] += 2.0 / det;
    let mut f = -t * det.ln();
    let mut g = V5::zeros();
    let mut h = M5::zeros();
    for k in 0..3 {
        g[k] = -t * gd[k] / det;
        for l in 0..3 {
            h[(k, l)] = t * hd[(k, l)];
        }
    }
    for (a, &off) in normals.iter().zip(offsets) {
        let v = Vec2::new(b11 * a.x + b12 * a.y, b12 * a.x + b22 * a.y);
        let r = v.norm();
        let sl = off - a.x * z[3] - a.y * z[4] - r;
        if !(sl > 0.0) {
            return None;
        }
        f -= sl.ln();
        // Jacobian of B a with respect to (b11, b12, b22).
        let j = SMatrix::<f64, 2, 3>::new(a.x, a.y, 0.0, 0.0, a.x, a.y);
        let grad_r = j.transpose() * v / r;
        let proj = (Matrix2::identity() - v * v.transpose() / (r * r)) / r;
        let hess_r = j.transpose() * proj * j;
        let ds = V5::from([-grad_r[0], -grad_r[1], -grad_r[2], -a.x, -a.y]);
        g -= ds / sl;
        h += ds * ds.transpose() / (sl * sl);
        for k in 0..3 {
            for l in 0..3 {
                h[(k, l)] += hess_r[(k, l)] / sl;
            }
        }
    }
    Some((f, g, h))
}
