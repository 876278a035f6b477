use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GapError, Result};

/// Open interval `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || !(b > a) {
            return Err(GapError::InvalidInput(format!(
                "interval ({a}, {b}) is empty or unbounded"
            )));
        }
        Ok(Interval { a, b })
    }

    /// `I_π = (−π/2, π/2)`.
    pub fn i_pi() -> Self {
        Interval {
            a: -FRAC_PI_2,
            b: FRAC_PI_2,
        }
    }

    /// `I_d = (−d/2, d/2)`.
    pub fn centered(d: f64) -> Result<Self> {
        Self::new(-0.5 * d, 0.5 * d)
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let a = self.a.max(other.a);
        let b = self.b.min(other.b);
        (b > a).then_some(Interval { a, b })
    }

    pub fn is_subset_of(&self, other: &Interval, tol: f64) -> bool {
        self.a >= other.a - tol && self.b <= other.b + tol
    }

    /// Centers of `n` equal cells.
    pub fn cell_centers(&self, n: usize) -> Vec<f64> {
        let h = self.len() / n as f64;
        (0..n).map(|i| self.a + (i as f64 + 0.5) * h).collect()
    }
}

/// Samples of a scalar function at increasing abscissae.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(xs.len(), values.len());
        GridFunction { xs, values }
    }

    /// `n + 1` equispaced nodes including both endpoints.
    pub fn sample(iv: Interval, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let xs: Vec<f64> = (0..=n)
            .map(|i| iv.a + iv.len() * i as f64 / n as f64)
            .collect();
        let values = xs.iter().map(|&x| f(x)).collect();
        GridFunction { xs, values }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Piecewise-linear interpolation, constant extension outside the nodes.
    pub fn interp(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.values[0];
        }
        if x >= self.xs[n - 1] {
            return self.values[n - 1];
        }
        let j = self.xs.partition_point(|&t| t <= x);
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let t = (x - x0) / (x1 - x0);
        self.values[j - 1] * (1.0 - t) + self.values[j] * t
    }

    /// Trapezoid rule for `∫ g(x, v(x))`.
    pub fn trapz_map(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        self.xs
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (g(x[0], v[0]) + g(x[1], v[1])))
            .sum()
    }

    pub fn integral(&self) -> f64 {
        self.trapz_map(|_, v| v)
    }

    pub fn l2_norm(&self) -> f64 {
        self.trapz_map(|_, v| v * v).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A scalar function given either in closed form or by equispaced samples.
#[derive(Clone)]
pub enum Sampler {
    Constant(f64),
    Analytic(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Linear interpolation of samples at `n` equispaced nodes on `[a, b]`.
    Table {
        a: f64,
        b: f64,
        values: Vec<f64>,
    },
}

impl Sampler {
    pub fn analytic(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Sampler::Analytic(Arc::new(f))
    }

    pub fn table(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !(b > a) {
            return Err(GapError::InvalidInput(
                "sample table needs two nodes on a proper interval".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GapError::InvalidInput("non-finite sample".into()));
        }
        Ok(Sampler::Table { a, b, values })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Sampler::Constant(c) => *c,
            Sampler::Analytic(f) => f(x),
            Sampler::Table { a, b, values } => {
                let n = values.len() - 1;
                let s = ((x - a) / (b - a) * n as f64).clamp(0.0, n as f64);
                let i = (s.floor() as usize).min(n - 1);
                let t = s - i as f64;
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Sampler::Constant(c) if *c == 0.0)
    }
}

impl fmt::Debug for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sampler::Constant(c) => write!(f, "Constant({c})"),
            Sampler::Analytic(_) => write!(f, "Analytic(..)"),
            Sampler::Table { a, b, values } => {
                write!(f, "Table([{a}, {b}], {} samples)", values.len())
            }
        }
    }
}
