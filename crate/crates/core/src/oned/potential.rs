use serde::Deserialize;

use super::{Interval, Sampler};
use crate::error::{GapError, Result};

/// Nonnegative measure `q = density dx + Σ mass δ_x` on `interval`, extended
/// by `+∞` outside the finiteness domain `dom`.
#[derive(Clone, Debug)]
pub struct MeasurePotential {
    pub interval: Interval,
    pub density: Sampler,
    pub atoms: Vec<(f64, f64)>,
    pub dom: Interval,
}

#[derive(Deserialize)]
struct GridSpec {
    a: f64,
    b: f64,
    n: usize,
}

#[derive(Deserialize)]
struct PotentialJson {
    grid: GridSpec,
    #[serde(default)]
    density: Vec<f64>,
    #[serde(default)]
    atoms: Vec<[f64; 2]>,
    dom: Option<[f64; 2]>,
}

impl MeasurePotential {
    pub fn new(
        interval: Interval,
        density: Sampler,
        atoms: Vec<(f64, f64)>,
        dom: Interval,
    ) -> Result<Self> {
        if !dom.is_subset_of(&interval, 1e-12 * interval.len()) {
            return Err(GapError::InvalidInput(
                "finiteness domain leaves the interval".into(),
            ));
        }
        if let Some(&(x, m)) = atoms.iter().find(|(x, m)| !(m >= &0.0) || !x.is_finite()) {
            return Err(GapError::InvalidInput(format!(
                "atom ({x}, {m}) must have finite location and mass ≥ 0"
            )));
        }
        if let Sampler::Table { values, .. } = &density {
            if values.iter().any(|v| *v < 0.0) {
                return Err(GapError::InvalidInput("negative density sample".into()));
            }
        }
        if let Sampler::Constant(c) = density {
            if !(c >= 0.0) {
                return Err(GapError::InvalidInput("negative density".into()));
            }
        }
        Ok(MeasurePotential {
            interval,
            density,
            atoms,
            dom,
        })
    }

    /// Absolutely continuous potential with full finiteness domain.
    pub fn smooth(interval: Interval, density: Sampler) -> Result<Self> {
        Self::new(interval, density, Vec::new(), interval)
    }

    pub fn zero(interval: Interval) -> Self {
        MeasurePotential {
            interval,
            density: Sampler::Constant(0.0),
            atoms: Vec::new(),
            dom: interval,
        }
    }

    /// Parses `{"grid": {"a", "b", "n"}, "density": [...], "atoms": [[x, m], ...], "dom": [a, d]}`.
    ///
    /// An empty `dom` interval is rejected with [`GapError::EmptyDomain`].
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PotentialJson = serde_json::from_str(text)
            .map_err(|e| GapError::InvalidInput(format!("potential JSON: {e}")))?;
        let interval = Interval::new(raw.grid.a, raw.grid.b)?;
        let density = if raw.density.is_empty() {
            Sampler::Constant(0.0)
        } else {
            if raw.density.len() != raw.grid.n {
                return Err(GapError::InvalidInput(format!(
                    "density has {} samples, grid.n = {}",
                    raw.density.len(),
                    raw.grid.n
                )));
            }
            Sampler::table(interval.a, interval.b, raw.density)?
        };
        let dom = match raw.dom {
            Some([a, d]) if !(d > a) => return Err(GapError::EmptyDomain),
            Some([a, d]) => Interval::new(a, d)?,
            None => interval,
        };
        Self::new(
            interval,
            density,
            raw.atoms.iter().map(|a| (a[0], a[1])).collect(),
            dom,
        )
    }

    /// Potential obtained by adding `other` (same interval); domains intersect.
    pub fn sum(&self, other: &MeasurePotential) -> Result<Self> {
        let dom = self
            .dom
            .intersect(&other.dom)
            .ok_or(GapError::EmptyDomain)?;
        let (d1, d2) = (self.density.clone(), other.density.clone());
        let density = Sampler::analytic(move |x| d1.eval(x) + d2.eval(x));
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        Self::new(self.interval, density, atoms, dom)
    }

    /// `t · q`, `t ≥ 0`.
    pub fn scaled(&self, t: f64) -> Self {
        let d = self.density.clone();
        MeasurePotential {
            interval: self.interval,
            density: Sampler::analytic(move |x| t * d.eval(x)),
            atoms: self.atoms.iter().map(|&(x, m)| (x, t * m)).collect(),
            dom: self.dom,
        }
    }

    /// Same measure restricted to a smaller finiteness domain.
    pub fn restricted(&self, dom: Interval) -> Result<Self> {
        let dom = self.dom.intersect(&dom).ok_or(GapError::EmptyDomain)?;
        Ok(MeasurePotential {
            dom,
            ..self.clone()
        })
    }

    /// `∫ v² dq` for `v` given by `f`, using `n` midpoint cells on `dom`.
    pub fn quadratic_form(&self, f: impl Fn(f64) -> f64, n: usize) -> f64 {
        let h = self.dom.len() / n as f64;
        let ac: f64 = self
            .dom
            .cell_centers(n)
            .iter()
            .map(|&x| self.density.eval(x) * f(x).powi(2) * h)
            .sum();
        let at: f64 = self
            .atoms
            .iter()
            .filter(|(x, _)| self.dom.contains(*x))
            .map(|&(x, m)| m * f(x).powi(2))
            .sum();
        ac + at
    }
}
