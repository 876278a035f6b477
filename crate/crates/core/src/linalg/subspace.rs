use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EnvelopeLdl, SparseSym};
use crate::error::{GapError, Result};

/// Settings for [`smallest_eigenpairs`].
#[derive(Clone, Debug)]
pub struct EigenOptions {
    /// Number of wanted eigenpairs.
    pub k: usize,
    /// Relative residual target `‖Ku − λMu‖ ≤ tol · max(|λ|, 1) · ‖Mu‖`, never
    /// below the rounding floor of `M⁻¹K`.
    pub tol: f64,
    pub max_iter: usize,
    /// A value known to lie below the smallest wanted eigenvalue.
    pub lower_bound: f64,
    /// `M`-orthonormal vectors spanning an invariant subspace with eigenvalue 0,
    /// excluded from the search.
    pub deflate: Vec<Vec<f64>>,
    pub seed: u64,
}

impl EigenOptions {
    pub fn new(k: usize, lower_bound: f64) -> Self {
        EigenOptions {
            k,
            tol: 1e-9,
            max_iter: 600,
            lower_bound,
            deflate: Vec::new(),
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// `M`-normalized eigenvectors.
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub shift: f64,
}

fn m_dot(m: &[f64], a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).zip(m).map(|((x, y), w)| x * y * w).sum()
}

fn deflate(m: &[f64], z: &[Vec<f64>], y: &mut [f64]) {
    for zi in z {
        let c = m_dot(m, zi, y);
        y.iter_mut().zip(zi).for_each(|(a, b)| *a -= c * b);
    }
}

/// `M`-orthonormalizes the block in place by twice-repeated modified Gram–Schmidt.
fn orthonormalize(m: &[f64], block: &mut Vec<Vec<f64>>) {
    for _ in 0..2 {
        let mut i = 0;
        while i < block.len() {
            let (done, rest) = block.split_at_mut(i);
            let v = &mut rest[0];
            for u in done.iter() {
                let c = m_dot(m, u, v);
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
            let nrm = m_dot(m, v, v).sqrt();
            if nrm > 0.0 && nrm.is_finite() {
                v.iter_mut().for_each(|a| *a /= nrm);
                i += 1;
            } else {
                block.remove(i);
            }
        }
    }
}

struct RitzState {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

/// One shift-invert sweep followed by Rayleigh–Ritz.
fn sweep(
    kmat: &SparseSym,
    m: &[f64],
    f: &EnvelopeLdl,
    z: &[Vec<f64>],
    block: &[Vec<f64>],
) -> Result<RitzState> {
    let mut y: Vec<Vec<f64>> = block
        .iter()
        .map(|x| {
            let mut v: Vec<f64> = x.iter().zip(m).map(|(a, w)| a * w).collect();
            f.solve_in_place(&mut v);
            deflate(m, z, &mut v);
            v
        })
        .collect();
    orthonormalize(m, &mut y);
    let p = y.len();
    if p == 0 {
        return Err(GapError::SolverFailed("subspace collapsed".into()));
    }
    let n = m.len();
    let mut ky = vec![vec![0.0; n]; p];
    for (v, out) in y.iter().zip(ky.iter_mut()) {
        kmat.matvec(v, out);
    }
    let kp = DMatrix::from_fn(p, p, |i, j| {
        let a: f64 = y[i].iter().zip(&ky[j]).map(|(a, b)| a * b).sum();
        let b: f64 = y[j].iter().zip(&ky[i]).map(|(a, b)| a * b).sum();
        0.5 * (a + b)
    });
    let eig = kp.symmetric_eigen();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = Vec::with_capacity(p);
    let mut vectors = Vec::with_capacity(p);
    for &c in &order {
        values.push(eig.eigenvalues[c]);
        let mut v = vec![0.0; n];
        for (j, yj) in y.iter().enumerate() {
            let q = eig.eigenvectors[(j, c)];
            v.iter_mut().zip(yj).for_each(|(a, b)| *a += q * b);
        }
        vectors.push(v);
    }
    Ok(RitzState { values, vectors })
}

fn residual(kmat: &SparseSym, m: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let mut kv = vec![0.0; v.len()];
    kmat.matvec(v, &mut kv);
    let mut r2 = 0.0;
    let mut mv2 = 0.0;
    for i in 0..v.len() {
        let mv = m[i] * v[i];
        r2 += (kv[i] - lambda * mv).powi(2);
        mv2 += mv * mv;
    }
    (r2 / mv2).sqrt()
}

/// Smallest `k` eigenpairs of `K u = λ M u`, `K` symmetric and `M` diagonal positive.
///
/// Shift-invert subspace iteration with block size `k + 4`. The shift starts at
/// `lower_bound` and is raised by inertia-guarded bisection toward the first
/// Ritz value, so it never passes the smallest eigenvalue.
pub fn smallest_eigenpairs(kmat: &SparseSym, m: &[f64], opts: &EigenOptions) -> Result<EigenPairs> {
    let n = kmat.dim();
    let free = n.saturating_sub(opts.deflate.len());
    if opts.k == 0 || opts.k > free {
        return Err(GapError::SolverFailed(format!(
            "cannot extract {} eigenpairs from dimension {free}",
            opts.k
        )));
    }
    let p = (opts.k + 4).min(free);
    let ndefl = opts.deflate.len();
    let below = |f: &EnvelopeLdl, s: f64| {
        f.inertia_negative()
            .saturating_sub(if s > 0.0 { ndefl } else { 0 })
    };

    let mut sigma = opts.lower_bound;
    let mut f = EnvelopeLdl::factor(kmat, m, sigma)?;
    let mut guard = 0;
    while below(&f, sigma) > 0 {
        sigma -= sigma.abs().max(1.0);
        f = EnvelopeLdl::factor(kmat, m, sigma)?;
        guard += 1;
        if guard > 60 {
            return Err(GapError::SolverFailed("no shift below the spectrum".into()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut block: Vec<Vec<f64>> = (0..p)
        .map(|_| {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            deflate(m, &opts.deflate, &mut v);
            v
        })
        .collect();
    orthonormalize(m, &mut block);

    let mut state = sweep(kmat, m, &f, &opts.deflate, &block)?;
    for _ in 0..4 {
        state = sweep(kmat, m, &f, &opts.deflate, &state.vectors)?;
    }
    // Raise the shift while the predicted contraction factor is poor.
    let kk = opts.k.min(state.values.len()) - 1;
    let theta_k = state.values[kk];
    let theta_p = *state.values.last().unwrap();
    let mut hi = state.values[0];
    let mut steps = 0;
    while (theta_k - sigma) > 0.3 * (theta_p - sigma)
        && (hi - sigma) > 1e-3 * hi.abs()
        && steps < 24
    {
        let mid = 0.5 * (sigma + hi);
        let fm = EnvelopeLdl::factor(kmat, m, mid)?;
        if below(&fm, mid) == 0 {
            sigma = mid;
            f = fm;
        } else {
            hi = mid;
        }
        steps += 1;
    }

    // Rounding floor for the residual: a few hundred ulps of ‖M⁻¹K‖∞.
    let knorm = (0..n)
        .map(|i| kmat.row(i).map(|e| e.1.abs()).sum::<f64>() / m[i])
        .fold(0.0, f64::max);
    let floor = 256.0 * f64::EPSILON * knorm;
    let mut iterations = 5;
    loop {
        state = sweep(kmat, m, &f, &opts.deflate, &state.vectors)?;
        iterations += 1;
        let residuals: Vec<f64> = (0..opts.k)
            .map(|i| residual(kmat, m, state.values[i], &state.vectors[i]))
            .collect();
        let ok = residuals
            .iter()
            .zip(&state.values)
            .all(|(r, l)| *r <= (opts.tol * l.abs().max(1.0)).max(floor));
        if ok {
            return Ok(EigenPairs {
                values: state.values[..opts.k].to_vec(),
                vectors: state.vectors[..opts.k].to_vec(),
                residuals,
                iterations,
                shift: sigma,
            });
        }
        if iterations >= opts.max_iter {
            let worst = residuals.iter().cloned().fold(0.0, f64::max);
            return Err(GapError::SolverFailed(format!(
                "subspace iteration stalled after {iterations} sweeps, residual {worst:e}"
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TripletBuilder;
    use std::f64::consts::PI;

    fn grid_laplacian(nx: usize, ny: usize) -> SparseSym {
        let id = |i: usize, j: usize| i * ny + j;
        let mut b = TripletBuilder::new(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                if i + 1 < nx {
                    b.add_edge(id(i, j), id(i + 1, j), 1.0);
                }
                if j + 1 < ny {
                    b.add_edge(id(i, j), id(i, j + 1), 1.0);
                }
                if i == 0 || i + 1 == nx {
                    b.add_diag(id(i, j), 1.0);
                }
                if j == 0 || j + 1 == ny {
                    b.add_diag(id(i, j), 1.0);
                }
            }
        }
        b.build()
    }

    #[test]
    fn dirichlet_grid_with_degenerate_pair() {
        let n = 20;
        let k = grid_laplacian(n, n);
        let m = vec![1.0; n * n];
        let r = smallest_eigenpairs(&k, &m, &EigenOptions::new(3, 0.0)).unwrap();
        let e = |a: usize| 2.0 - 2.0 * (PI * a as f64 / (n + 1) as f64).cos();
        let exact = [2.0 * e(1), e(1) + e(2), e(1) + e(2)];
        for i in 0..3 {
            assert!((r.values[i] - exact[i]).abs() < 1e-10, "{:?}", r.values);
        }
        let dot: f64 = r.vectors[0]
            .iter()
            .zip(&r.vectors[1])
            .map(|(a, b)| a * b)
            .sum();
        assert!(dot.abs() < 1e-10);
    }

    #[test]
    fn neumann_path_with_deflation() {
        let n = 60;
        let mut b = TripletBuilder::new(n);
        for i in 0..n - 1 {
            b.add_edge(i, i + 1, 1.0);
        }
        let k = b.build();
        let m = vec![1.0; n];
        let mut opts = EigenOptions::new(2, -0.01);
        opts.deflate = vec![vec![1.0 / (n as f64).sqrt(); n]];
        let r = smallest_eigenpairs(&k, &m, &opts).unwrap();
        for (i, v) in r.values.iter().enumerate() {
            let exact = 2.0 - 2.0 * (PI * (i + 1) as f64 / n as f64).cos();
            assert!((v - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn thin_strip_clustered_spectrum() {
        let (nx, ny) = (400, 6);
        let k = grid_laplacian(nx, ny);
        let m = vec![1.0; nx * ny];
        let r = smallest_eigenpairs(&k, &m, &EigenOptions::new(2, 0.0)).unwrap();
        let e = |a: usize, n: usize| 2.0 - 2.0 * (PI * a as f64 / (n + 1) as f64).cos();
        assert!((r.values[0] - e(1, nx) - e(1, ny)).abs() < 1e-11);
        assert!((r.values[1] - e(2, nx) - e(1, ny)).abs() < 1e-11);
    }
}
