use super::SparseSym;
use crate::error::{GapError, Result};

/// `LDLᵀ` factorization of `K - σ diag(m)` in variable-band (envelope) storage.
///
/// No pivoting; the inertia of `D` counts the generalized eigenvalues below `σ`.
pub struct EnvelopeLdl {
    first: Vec<usize>,
    offset: Vec<usize>,
    l: Vec<f64>,
    d: Vec<f64>,
    negative: usize,
}

impl EnvelopeLdl {
    pub fn factor(k: &SparseSym, m: &[f64], sigma: f64) -> Result<Self> {
        let n = k.dim();
        let mut first = vec![0usize; n];
        for i in 0..n {
            first[i] = k.row(i).map(|e| e.0).filter(|&c| c <= i).min().unwrap_or(i);
        }
        let mut offset = vec![0usize; n + 1];
        for i in 0..n {
            offset[i + 1] = offset[i] + (i - first[i]);
        }
        let mut l = vec![0.0; offset[n]];
        let mut d = vec![0.0; n];
        for i in 0..n {
            for (c, v) in k.row(i) {
                if c < i {
                    l[offset[i] + c - first[i]] = v;
                }
            }
            d[i] = k.diag(i) - sigma * m[i];
        }
        let scale = d
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let mut negative = 0;
        let mut g: Vec<f64> = Vec::new();
        for i in 0..n {
            let fi = first[i];
            let row = offset[i];
            let len = i - fi;
            g.clear();
            g.extend_from_slice(&l[row..row + len]);
            // g_j = A_ij - Σ_k g_k L_jk, over the overlap of envelopes.
            for jj in 0..len {
                let j = fi + jj;
                let fj = first[j];
                let start = fi.max(fj);
                let lj = &l[offset[j] + start - fj..offset[j] + j - fj];
                let gi = &g[start - fi..jj];
                let s: f64 = gi.iter().zip(lj).map(|(a, b)| a * b).sum();
                g[jj] -= s;
            }
            let mut di = d[i];
            for jj in 0..len {
                let lij = g[jj] / d[fi + jj];
                di -= g[jj] * lij;
                l[row + jj] = lij;
            }
            if !di.is_finite() {
                return Err(GapError::SolverFailed("non-finite pivot in LDLᵀ".into()));
            }
            if di.abs() < 1e-300 || di.abs() < 1e-15 * scale * f64::EPSILON {
                di = if di < 0.0 {
                    -1e-15 * scale
                } else {
                    1e-15 * scale
                };
            }
            if di < 0.0 {
                negative += 1;
            }
            d[i] = di;
        }
        Ok(EnvelopeLdl {
            first,
            offset,
            l,
            d,
            negative,
        })
    }

    /// Number of negative pivots.
    pub fn inertia_negative(&self) -> usize {
        self.negative
    }

    pub fn storage(&self) -> usize {
        self.l.len()
    }

    /// Overwrites `x` with `(LDLᵀ)⁻¹ x`.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.l[self.offset[i]..self.offset[i + 1]];
            let s: f64 = row.iter().zip(&x[fi..i]).map(|(a, b)| a * b).sum();
            x[i] -= s;
        }
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let xi = x[i];
            let row = &self.l[self.offset[i]..self.offset[i + 1]];
            for (t, v) in x[fi..i].iter_mut().zip(row) {
                *t -= v * xi;
            }
        }
    }
}
