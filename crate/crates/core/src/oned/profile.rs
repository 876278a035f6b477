use std::sync::Arc;

use serde::Serialize;

use super::{Interval, MeasurePotential, Sampler, EPS_A, EPS_MONO};
use crate::error::{GapError, Result};

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    /// Continuous part, its derivative, and upward jumps `(location, size)`.
    Analytic {
        f: Func,
        df: Func,
        jumps: Vec<(f64, f64)>,
    },
    /// Piecewise-linear interpolation of samples.
    Table { xs: Vec<f64>, values: Vec<f64> },
}

/// Nondecreasing extended-real function on `I_π`: finite on `dom`, `−∞` to the
/// left of it and `+∞` to the right.
#[derive(Clone)]
pub struct MonotoneProfile {
    dom: Interval,
    repr: Repr,
}

impl std::fmt::Debug for MonotoneProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.repr {
            Repr::Analytic { jumps, .. } => format!("analytic, {} jumps", jumps.len()),
            Repr::Table { xs, .. } => format!("table, {} samples", xs.len()),
        };
        write!(
            f,
            "MonotoneProfile(({}, {}), {kind})",
            self.dom.a, self.dom.b
        )
    }
}

impl MonotoneProfile {
    /// `f` continuous on `dom` with derivative `df ≥ 0`.
    pub fn analytic(
        dom: Interval,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(MonotoneProfile {
            dom,
            repr: Repr::Analytic {
                f: Arc::new(f),
                df: Arc::new(df),
                jumps: Vec::new(),
            },
        })
    }

    /// Samples at increasing abscissae spanning `dom`; values must be nondecreasing.
    pub fn from_samples(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(GapError::InvalidInput(
                "profile needs matching abscissae and values".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|v| !v.is_finite()) {
            return Err(GapError::InvalidInput(
                "profile abscissae must increase, values be finite".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] < w[0] - EPS_MONO) {
            return Err(GapError::InvalidInput(
                "profile is not nondecreasing".into(),
            ));
        }
        let dom = Interval::new(xs[0], *xs.last().unwrap())?;
        Ok(MonotoneProfile {
            dom,
            repr: Repr::Table { xs, values },
        })
    }

    /// `ψ(x) = tan x` on `I_π`.
    pub fn tan() -> Self {
        Self::analytic(Interval::i_pi(), f64::tan, |x| 1.0 + x.tan().powi(2)).unwrap()
    }

    /// `tan x` restricted to `I_d`, extended by `±∞` outside.
    pub fn truncated_tan(d: f64) -> Result<Self> {
        Self::analytic(Interval::centered(d)?, f64::tan, |x| 1.0 + x.tan().powi(2))
    }

    /// Adds an upward jump of `size ≥ 0` at `x ∈ dom`; analytic profiles only.
    pub fn with_jump(mut self, x: f64, size: f64) -> Result<Self> {
        if !(size >= 0.0) || !self.dom.contains(x) {
            return Err(GapError::InvalidInput(format!(
                "jump ({x}, {size}) invalid"
            )));
        }
        match &mut self.repr {
            Repr::Analytic { jumps, .. } => {
                jumps.push((x, size));
                jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
                Ok(self)
            }
            Repr::Table { .. } => Err(GapError::InvalidInput(
                "jumps need an analytic profile".into(),
            )),
        }
    }

    /// `k ψ + c` with `k ≥ 0`.
    pub fn affine_image(&self, k: f64, c: f64) -> Self {
        let repr = match &self.repr {
            Repr::Analytic { f, df, jumps } => {
                let (f, df) = (f.clone(), df.clone());
                Repr::Analytic {
                    f: Arc::new(move |x| k * f(x) + c),
                    df: Arc::new(move |x| k * df(x)),
                    jumps: jumps.iter().map(|&(x, s)| (x, k * s)).collect(),
                }
            }
            Repr::Table { xs, values } => Repr::Table {
                xs: xs.clone(),
                values: values.iter().map(|v| k * v + c).collect(),
            },
        };
        MonotoneProfile {
            dom: self.dom,
            repr,
        }
    }

    /// Pointwise sum with an analytic nondecreasing `g` (derivative `dg`) on the same domain.
    pub fn plus(
        &self,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dg: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        match &self.repr {
            Repr::Analytic { f, df, jumps } => {
                let (f, df) = (f.clone(), df.clone());
                Ok(MonotoneProfile {
                    dom: self.dom,
                    repr: Repr::Analytic {
                        f: Arc::new(move |x| f(x) + g(x)),
                        df: Arc::new(move |x| df(x) + dg(x)),
                        jumps: jumps.clone(),
                    },
                })
            }
            Repr::Table { .. } => Err(GapError::InvalidInput(
                "sums need an analytic profile".into(),
            )),
        }
    }

    pub fn dom(&self) -> Interval {
        self.dom
    }

    /// Upward jumps `(location, size)`.
    pub fn jumps(&self) -> &[(f64, f64)] {
        match &self.repr {
            Repr::Analytic { jumps, .. } => jumps,
            Repr::Table { .. } => &[],
        }
    }

    /// `ψ(x)`, with `∓∞` outside the domain. At a jump the left limit is returned.
    pub fn value(&self, x: f64) -> f64 {
        if x <= self.dom.a {
            return f64::NEG_INFINITY;
        }
        if x >= self.dom.b {
            return f64::INFINITY;
        }
        match &self.repr {
            Repr::Analytic { f, jumps, .. } => {
                f(x) + jumps.iter().filter(|j| j.0 < x).map(|j| j.1).sum::<f64>()
            }
            Repr::Table { xs, values } => interp(xs, values, x),
        }
    }

    /// Density of the absolutely continuous part of `ψ′`.
    pub fn ac_derivative(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Analytic { df, .. } => df(x),
            Repr::Table { xs, values } => {
                let j = xs.partition_point(|&t| t <= x).clamp(1, xs.len() - 1);
                (values[j] - values[j - 1]) / (xs[j] - xs[j - 1])
            }
        }
    }

    /// Samples at the `n` cell centers of the domain.
    pub fn samples(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let xs = self.dom.cell_centers(n);
        let vs = xs.iter().map(|&x| self.value(x)).collect();
        (xs, vs)
    }

    /// `q = ψ′ + ψ²`: jumps of `ψ` become atoms.
    pub fn potential(&self) -> MeasurePotential {
        self.combination(1.0, 1.0)
    }

    /// `2ψ²`.
    pub fn potential_two_sq(&self) -> MeasurePotential {
        self.combination(0.0, 2.0)
    }

    /// `2ψ′`.
    pub fn potential_two_derivative(&self) -> MeasurePotential {
        self.combination(2.0, 0.0)
    }

    /// `α ψ′ + β ψ²` on the hull of `I_π` and `dom ψ`, finite on `dom ψ`.
    pub fn combination(&self, alpha: f64, beta: f64) -> MeasurePotential {
        let p = self.clone();
        let density =
            Sampler::analytic(move |x| alpha * p.ac_derivative(x) + beta * p.value(x).powi(2));
        let atoms = self
            .jumps()
            .iter()
            .map(|&(x, s)| (x, alpha * s))
            .filter(|a| a.1 > 0.0)
            .collect();
        let ip = Interval::i_pi();
        let interval = Interval {
            a: ip.a.min(self.dom.a),
            b: ip.b.max(self.dom.b),
        };
        MeasurePotential {
            interval,
            density,
            atoms,
            dom: self.dom,
        }
    }
}

fn interp(xs: &[f64], vs: &[f64], x: f64) -> f64 {
    let j = xs.partition_point(|&t| t <= x).clamp(1, xs.len() - 1);
    let t = ((x - xs[j - 1]) / (xs[j] - xs[j - 1])).clamp(0.0, 1.0);
    vs[j - 1] * (1.0 - t) + vs[j] * t
}

/// Outcome of the class-𝒜 pair test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassAReport {
    pub member: bool,
    /// Largest value of `2 tan((y − x)/2) − (ψ(y) − ψ(x))` over grid pairs.
    pub worst_violation: f64,
    pub worst_pair: (f64, f64),
}

/// Tests `ψ(y) − ψ(x) ≥ 2 tan((y − x)/2) − EPS_A` on all pairs of `n` cell
/// centers of the finiteness domain.
pub fn is_in_class_a(psi: &MonotoneProfile, n: usize) -> ClassAReport {
    let (xs, vs) = psi.samples(n);
    let mut worst = f64::NEG_INFINITY;
    let mut pair = (xs[0], xs[0]);
    let mut monotone = true;
    for i in 0..n {
        if i + 1 < n && vs[i + 1] < vs[i] - EPS_MONO {
            monotone = false;
        }
        for j in i + 1..n {
            let v = 2.0 * (0.5 * (xs[j] - xs[i])).tan() - (vs[j] - vs[i]);
            if v > worst {
                worst = v;
                pair = (xs[i], xs[j]);
            }
        }
    }
    ClassAReport {
        member: monotone && worst <= EPS_A,
        worst_violation: worst,
        worst_pair: pair,
    }
}
