//! Blocked and stratified rearrangements of piecewise-linear test functions,
//! stratified potentials, and the associated rearrangement inequalities.

mod eta;
pub mod pl;
mod quad;

pub use eta::{eta1_stratified, Eta1Result};

use serde::Serialize;

use crate::error::{GapError, Result};
use crate::oned::{GridFunction, Interval, MonotoneProfile, Sampler};

/// Continuous piecewise-linear function on an interval, with its global minimum
/// at both endpoints and no plateaus above that level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestFunction {
    f: GridFunction,
}

impl TestFunction {
    /// Endpoint values within `1e-12 · max|f|` of zero are set to zero.
    pub fn new(mut f: GridFunction) -> Result<Self> {
        let n = f.len();
        if n < 3 || f.values.len() != n {
            return Err(GapError::InvalidInput(
                "test function needs at least 3 nodes".into(),
            ));
        }
        if f.xs.windows(2).any(|w| !(w[1] > w[0])) || f.values.iter().any(|v| !v.is_finite()) {
            return Err(GapError::InvalidInput(
                "nodes must increase and values be finite".into(),
            ));
        }
        let tiny = 1e-12 * f.max_abs();
        for i in [0, n - 1] {
            if f.values[i].abs() <= tiny {
                f.values[i] = 0.0;
            }
        }
        let (l, r) = (f.values[0], f.values[n - 1]);
        if l != r {
            return Err(GapError::InvalidInput("endpoint values differ".into()));
        }
        if f.values.iter().any(|&v| v < l) {
            return Err(GapError::InvalidInput(
                "global minimum not attained at the endpoints".into(),
            ));
        }
        if f.values.windows(2).any(|w| w[0] == w[1] && w[0] != l) {
            return Err(GapError::InvalidInput(
                "plateaus above the minimum are not allowed".into(),
            ));
        }
        Ok(TestFunction { f })
    }

    /// Samples `g` at `n + 1` equispaced nodes of `iv`.
    pub fn sample(iv: Interval, n: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(GridFunction::sample(iv, n, g))
    }

    pub fn function(&self) -> &GridFunction {
        &self.f
    }

    pub fn interval(&self) -> Interval {
        Interval {
            a: self.f.xs[0],
            b: *self.f.xs.last().unwrap(),
        }
    }

    /// Whether the function vanishes at the endpoints.
    pub fn is_h10(&self) -> bool {
        self.f.values[0] == 0.0
    }

    pub fn max_abs(&self) -> f64 {
        self.f.max_abs()
    }

    /// Largest spacing between consecutive nodes.
    pub fn max_step(&self) -> f64 {
        self.f
            .xs
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// Symmetric decreasing rearrangement about the midpoint of `iv`.
///
/// `f` must span `iv` and take its minimum at both endpoints. The result is
/// exact: the distribution function of a piecewise-linear function is
/// piecewise linear in the level.
pub fn symmetric_decreasing(f: &GridFunction, iv: Interval) -> GridFunction {
    let base = f.values[0].min(*f.values.last().unwrap());
    let mid = iv.mid();
    let mut levels: Vec<f64> = f.values.iter().cloned().filter(|&v| v >= base).collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let half = 0.5 * iv.len();
    // Right half: (offset, value) pairs with increasing offset.
    let mut right: Vec<(f64, f64)> = Vec::with_capacity(2 * levels.len() + 1);
    for &t in &levels {
        let strict = 0.5 * pl::level_measure(f, t, true);
        let loose = 0.5 * pl::level_measure(f, t, false);
        right.push((strict.min(half), t));
        if loose > strict {
            right.push((loose.min(half), t));
        }
    }
    if right.last().map_or(true, |r| r.0 < half) {
        right.push((half, base));
    }
    right.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let tol = 1e-14 * iv.len();
    let mut xs = Vec::with_capacity(2 * right.len());
    let mut vs = Vec::with_capacity(2 * right.len());
    for &(s, v) in right.iter().rev() {
        xs.push(mid - s);
        vs.push(v);
    }
    for &(s, v) in &right {
        xs.push(mid + s);
        vs.push(v);
    }
    let mut out = pl::concat(&[GridFunction::new(xs, vs)], tol);
    out.xs[0] = iv.a;
    *out.xs.last_mut().unwrap() = iv.b;
    out
}

/// Result of one blocked rearrangement.
#[derive(Clone, Debug)]
pub struct Blocked {
    pub function: GridFunction,
    /// Lowest local-minimum level and the two child intervals `{v♭ > ℓ}`.
    pub split: Option<(f64, Interval, Interval)>,
}

/// Lowest strict interior local minimum above the endpoint level; among equal
/// levels the leftmost wins.
fn lowest_minimum(f: &GridFunction) -> Option<usize> {
    let base = f.values[0].max(*f.values.last().unwrap());
    pl::local_minima(f)
        .into_iter()
        .filter(|&i| f.values[i] > base)
        .min_by(|&a, &b| f.values[a].total_cmp(&f.values[b]))
}

/// Blocked rearrangement of `f` on `iv` (`f` spans `iv`).
pub fn blocked_rearrangement(f: &GridFunction, iv: Interval) -> Result<Blocked> {
    let star = symmetric_decreasing(f, iv);
    let Some(p) = lowest_minimum(f) else {
        return Ok(Blocked {
            function: star,
            split: None,
        });
    };
    let ell = f.values[p];
    let c1 = crossing(f, ell, true);
    let c2 = crossing(f, ell, false);
    let x_ell = 0.5 * (c1 + c2);
    let shift = iv.mid() - x_ell;
    let len = c2 - c1;
    let (lo, hi) = (iv.mid() - 0.5 * len, iv.mid() + 0.5 * len);
    let tol = 1e-14 * iv.len();
    let left = pl::restrict(&star, iv.a, lo);
    let centre = pl::translate(&pl::restrict(f, c1, c2), shift);
    let right = pl::restrict(&star, hi, iv.b);
    let mut function = pl::concat(&[left, centre, right], tol);
    // The three pieces meet at level ℓ; pin the junctions to it exactly.
    for (x, v) in function.xs.iter().zip(function.values.iter_mut()) {
        if (*x - lo).abs() <= tol || (*x - hi).abs() <= tol {
            *v = ell;
        }
    }
    let pm = f.xs[p] + shift;
    Ok(Blocked {
        function,
        split: Some((ell, Interval { a: lo, b: pm }, Interval { a: pm, b: hi })),
    })
}

/// First (from the left) or last (from the right) point where `f` crosses `t`.
fn crossing(f: &GridFunction, t: f64, from_left: bool) -> f64 {
    let n = f.len();
    let idx: Box<dyn Iterator<Item = usize>> = if from_left {
        Box::new(0..n - 1)
    } else {
        Box::new((0..n - 1).rev())
    };
    for i in idx {
        let (y0, y1) = (f.values[i], f.values[i + 1]);
        let hit = if from_left {
            y0 <= t && y1 > t
        } else {
            y0 > t && y1 <= t
        };
        if hit {
            let s = (t - y0) / (y1 - y0);
            return f.xs[i] + s * (f.xs[i + 1] - f.xs[i]);
        }
    }
    if from_left {
        f.xs[0]
    } else {
        f.xs[n - 1]
    }
}

/// One interval `I^α` of the stratified decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct TreeNode {
    /// Multi-index `(1, α₂, …)`.
    pub alpha: Vec<u8>,
    pub interval: Interval,
    /// Indices of `I^{α,1}` and `I^{α,2}` in the node list.
    pub children: Option<(usize, usize)>,
    /// Lowest local-minimum level that produced the children.
    pub level: Option<f64>,
}

/// Interval tree, stratified rearrangement `ṽ` and stratified potential `V`.
#[derive(Clone, Debug, Serialize)]
pub struct StratifiedDecomposition {
    pub nodes: Vec<TreeNode>,
    pub rearranged: GridFunction,
}

impl StratifiedDecomposition {
    /// Multi-indices with both children.
    pub fn gamma(&self) -> Vec<Vec<u8>> {
        self.nodes
            .iter()
            .filter(|n| n.children.is_some())
            .map(|n| n.alpha.clone())
            .collect()
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> Vec<&TreeNode> {
        self.nodes.iter().filter(|n| n.children.is_none()).collect()
    }

    /// Deepest tree interval containing `x`.
    pub fn deepest(&self, x: f64) -> &TreeNode {
        let mut node = &self.nodes[0];
        while let Some((c1, c2)) = node.children {
            let (n1, n2) = (&self.nodes[c1], &self.nodes[c2]);
            if n1.interval.contains(x) {
                node = n1;
            } else if n2.interval.contains(x) {
                node = n2;
            } else {
                break;
            }
        }
        node
    }

    /// `V(x) = 1 + tan²(x − x_α)` with `α` the deepest interval containing `x`.
    pub fn potential(&self, x: f64) -> f64 {
        1.0 + (x - self.deepest(x).interval.mid()).tan().powi(2)
    }

    pub fn potential_sampler(&self) -> Sampler {
        let me = self.clone();
        Sampler::analytic(move |x| me.potential(x))
    }

    /// `V` at `n + 1` equispaced nodes strictly inside the root interval
    /// (endpoints are moved half a step inward, where `V` is finite).
    pub fn potential_samples(&self, n: usize) -> GridFunction {
        let iv = self.root().interval;
        let h = iv.len() / n as f64;
        let xs: Vec<f64> = (0..=n)
            .map(|i| (iv.a + i as f64 * h).clamp(iv.a + 0.5 * h, iv.b - 0.5 * h))
            .collect();
        let vs = xs.iter().map(|&x| self.potential(x)).collect();
        GridFunction::new(xs, vs)
    }

    /// Constraint triples `(a₁, a₂, a₃)` of the branching intervals.
    pub fn constraints(&self) -> Vec<(f64, f64, f64)> {
        self.nodes
            .iter()
            .filter_map(|n| n.children)
            .map(|(c1, c2)| {
                let (i1, i2) = (self.nodes[c1].interval, self.nodes[c2].interval);
                (i1.a, i1.b, i2.b)
            })
            .collect()
    }

    /// Breakpoints of `V` and `ṽ`, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.rearranged.xs.clone();
        for n in &self.nodes {
            b.push(n.interval.a);
            b.push(n.interval.b);
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

/// Stratified rearrangement by recursive blocked rearrangements.
pub fn stratified(v: &TestFunction) -> Result<StratifiedDecomposition> {
    let mut nodes = Vec::new();
    let rearranged = recurse(v.function(), v.interval(), vec![1], &mut nodes)?;
    Ok(StratifiedDecomposition { nodes, rearranged })
}

fn recurse(
    f: &GridFunction,
    iv: Interval,
    alpha: Vec<u8>,
    nodes: &mut Vec<TreeNode>,
) -> Result<GridFunction> {
    let me = nodes.len();
    nodes.push(TreeNode {
        alpha: alpha.clone(),
        interval: iv,
        children: None,
        level: None,
    });
    let b = blocked_rearrangement(f, iv)?;
    let Some((ell, j1, j2)) = b.split else {
        return Ok(b.function);
    };
    let mut parts = Vec::new();
    let mut kids = [0usize; 2];
    parts.push(pl::restrict(&b.function, iv.a, j1.a));
    for (k, j) in [j1, j2].into_iter().enumerate() {
        let mut a = alpha.clone();
        a.push(k as u8 + 1);
        kids[k] = nodes.len();
        let sub = pl::restrict(&b.function, j.a, j.b);
        parts.push(recurse(&sub, j, a, nodes)?);
    }
    parts.push(pl::restrict(&b.function, j2.b, iv.b));
    nodes[me].children = Some((kids[0], kids[1]));
    nodes[me].level = Some(ell);
    Ok(pl::concat(&parts, 1e-14 * iv.len()))
}

/// Both sides of the stratified rearrangement inequality.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaTildeReport {
    /// `∫ v² dν_{ψ′}`; infinite when `v` does not vanish outside `dom ψ`.
    pub lhs: f64,
    /// `∫ V ṽ² dx`.
    pub rhs: f64,
    pub slack: f64,
    pub vacuous: bool,
    pub gamma_size: usize,
}

const GL_POINTS: usize = 10;
const GL_PANELS: usize = 4;

/// Evaluates `∫ v² dν_{ψ′}` and `∫ V ṽ²` for a test function on `I_π`.
pub fn check_lemma_tilde(psi: &MonotoneProfile, v: &TestFunction) -> Result<LemmaTildeReport> {
    let f = v.function();
    if !v.is_h10() {
        return Err(GapError::Precondition(
            "test function must vanish at the endpoints".into(),
        ));
    }
    let dec = stratified(v)?;
    let rule = quad::gauss_legendre(GL_POINTS);
    let rt = dec.rearranged.clone();
    let rhs = quad::integrate(&dec.breakpoints(), GL_PANELS, &rule, |x| {
        dec.potential(x) * rt.interp(x).powi(2)
    });
    let dom = psi.dom();
    let outside =
        f.xs.iter()
            .zip(&f.values)
            .any(|(&x, &y)| (x < dom.a || x > dom.b) && y != 0.0)
            || f.interp(dom.a) != 0.0 && dom.a > f.xs[0]
            || f.interp(dom.b) != 0.0 && dom.b < *f.xs.last().unwrap();
    if outside {
        return Ok(LemmaTildeReport {
            lhs: f64::INFINITY,
            rhs,
            slack: f64::INFINITY,
            vacuous: true,
            gamma_size: dec.gamma().len(),
        });
    }
    let mut breaks: Vec<f64> = f.xs.iter().cloned().filter(|x| dom.contains(*x)).collect();
    breaks.push(dom.a.max(f.xs[0]));
    breaks.push(dom.b.min(*f.xs.last().unwrap()));
    breaks.extend(psi.jumps().iter().map(|j| j.0));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let ac = quad::integrate(&breaks, GL_PANELS, &rule, |x| {
        psi.ac_derivative(x) * f.interp(x).powi(2)
    });
    let atoms: f64 = psi
        .jumps()
        .iter()
        .map(|&(x, s)| s * f.interp(x).powi(2))
        .sum();
    let lhs = ac + atoms;
    Ok(LemmaTildeReport {
        lhs,
        rhs,
        slack: lhs - rhs,
        vacuous: false,
        gamma_size: dec.gamma().len(),
    })
}

#[cfg(test)]
mod tests;
