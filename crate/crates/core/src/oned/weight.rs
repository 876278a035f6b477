use super::{Interval, MeasurePotential, MonotoneProfile, Sampler};
use crate::error::{GapError, Result};

/// Positive weight on its finiteness domain.
#[derive(Clone, Debug)]
pub struct Weight1D {
    pub dom: Interval,
    pub density: Sampler,
}

impl Weight1D {
    pub fn new(dom: Interval, density: Sampler) -> Self {
        Weight1D { dom, density }
    }

    pub fn analytic(dom: Interval, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Weight1D {
            dom,
            density: Sampler::analytic(f),
        }
    }

    pub fn constant(dom: Interval, c: f64) -> Self {
        Weight1D {
            dom,
            density: Sampler::Constant(c),
        }
    }

    /// Equispaced samples spanning `dom` (endpoints included).
    pub fn from_samples(dom: Interval, values: Vec<f64>) -> Result<Self> {
        Ok(Weight1D {
            dom,
            density: Sampler::table(dom.a, dom.b, values)?,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.density.eval(x)
    }

    /// Largest second difference of `log p` over `n` interior cells; `≤ 0` up to
    /// rounding for log-concave weights.
    pub fn log_concavity_defect(&self, n: usize) -> f64 {
        let xs = self.dom.cell_centers(n);
        let l: Vec<f64> = xs.iter().map(|&x| self.eval(x).ln()).collect();
        l.windows(3)
            .map(|w| w[0] - 2.0 * w[1] + w[2])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest midpoint defect of `p^{1/m}`; `≤ 0` for `(1/m)`-concave weights.
    pub fn power_concavity_defect(&self, m: f64, n: usize) -> f64 {
        let xs = self.dom.cell_centers(n);
        let l: Vec<f64> = xs.iter().map(|&x| self.eval(x).powf(1.0 / m)).collect();
        let scale = l
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        l.windows(3)
            .map(|w| (w[0] - 2.0 * w[1] + w[2]) / scale)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_max_on(&self, iv: Interval, n: usize) -> (f64, f64) {
        GridSamples::of(self, iv, n).min_max()
    }
}

struct GridSamples(Vec<f64>);

impl GridSamples {
    fn of(p: &Weight1D, iv: Interval, n: usize) -> Self {
        GridSamples(
            (0..=n)
                .map(|i| p.eval(iv.a + iv.len() * i as f64 / n as f64))
                .collect(),
        )
    }

    fn min_max(&self) -> (f64, f64) {
        self.0
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Relative size above which a cell mass of `ψ′` is treated as an atom.
const ATOM_FACTOR: f64 = 20.0;

/// `ψ_p = −(log p^{1/2})′` and `m_p = ψ_p′ + ψ_p²` from `n` cells of `p`.
///
/// `ψ_p` is differenced at cell faces; its increments across cells form the
/// measure `ψ_p′`. Increments far above the local smooth level are atoms, with
/// adjacent candidates merged at their mass-weighted location.
pub fn measure_from_weight(p: &Weight1D, n: usize) -> Result<(MonotoneProfile, MeasurePotential)> {
    if n < 8 {
        return Err(GapError::InvalidInput(
            "measure_from_weight needs n >= 8".into(),
        ));
    }
    let dom = p.dom;
    let h = dom.len() / n as f64;
    let centers = dom.cell_centers(n);
    let logp: Vec<f64> = centers
        .iter()
        .map(|&x| {
            let v = p.eval(x);
            if v > 0.0 && v.is_finite() {
                Ok(v.ln())
            } else {
                Err(GapError::DegenerateWeight)
            }
        })
        .collect::<Result<_>>()?;
    // ψ at interior faces x_j = a + j h, j = 1..n-1.
    let faces: Vec<f64> = (1..n).map(|j| dom.a + j as f64 * h).collect();
    let psi: Vec<f64> = (1..n).map(|j| -0.5 * (logp[j] - logp[j - 1]) / h).collect();
    // Increment of ψ across cell j (j = 1..n-2), located at its center.
    let inc: Vec<f64> = psi.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = 1.0 + psi.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let worst = inc.iter().cloned().fold(f64::INFINITY, f64::min);
    if worst < -1e-8 * scale {
        return Err(GapError::NotLogConcave { worst });
    }
    let m = inc.len();
    let mut atom_flag = vec![false; m];
    for j in 0..m {
        let lo = j.saturating_sub(8);
        let hi = (j + 9).min(m);
        let mut local: Vec<f64> = (lo..hi)
            .filter(|&k| k + 1 < j || k > j + 1)
            .map(|k| inc[k].abs())
            .collect();
        local.sort_by(f64::total_cmp);
        let med = local.get(local.len() / 2).copied().unwrap_or(0.0);
        atom_flag[j] = inc[j] > ATOM_FACTOR * (med + h) && inc[j] > 1e-6;
    }
    let mut atoms = Vec::new();
    let mut j = 0;
    while j < m {
        if atom_flag[j] {
            let mut mass = 0.0;
            let mut moment = 0.0;
            while j < m && atom_flag[j] {
                mass += inc[j];
                moment += inc[j] * centers[j + 1];
                j += 1;
            }
            atoms.push((moment / mass, mass));
        } else {
            j += 1;
        }
    }
    // Smooth density per cell; atom cells borrow the mean of their smooth neighbours.
    let mut dens: Vec<Option<f64>> = (0..m)
        .map(|k| {
            (!atom_flag[k]).then(|| inc[k].max(0.0) / h + (0.5 * (psi[k] + psi[k + 1])).powi(2))
        })
        .collect();
    for k in 0..m {
        if dens[k].is_none() {
            let left = (0..k).rev().find_map(|i| dens[i]);
            let right = (k + 1..m).find_map(|i| dens[i]);
            dens[k] = Some(match (left, right) {
                (Some(a), Some(b)) => 0.5 * (a + b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => 0.0,
            });
        }
    }
    let dens: Vec<f64> = dens.into_iter().map(|d| d.unwrap()).collect();
    let mut xs = Vec::with_capacity(m + 2);
    let mut ds = Vec::with_capacity(m + 2);
    xs.push(dom.a);
    ds.push(dens[0]);
    for k in 0..m {
        xs.push(centers[k + 1]);
        ds.push(dens[k]);
    }
    xs.push(dom.b);
    ds.push(dens[m - 1]);
    let density_fn = super::GridFunction::new(xs, ds);
    let density = Sampler::analytic(move |x| density_fn.interp(x));
    let profile = MonotoneProfile::from_samples(faces, psi)?;
    let potential = MeasurePotential {
        interval: dom,
        density,
        atoms,
        dom,
    };
    Ok((profile, potential))
}
