//! Exact operations on continuous piecewise-linear functions stored as
//! [`GridFunction`] node lists.

use crate::oned::GridFunction;

/// `|{f > t}|` (strict) or `|{f ≥ t}|` over the node range.
pub fn level_measure(f: &GridFunction, t: f64, strict: bool) -> f64 {
    let above = |y: f64| if strict { y > t } else { y >= t };
    let mut m = 0.0;
    for (x, y) in f.xs.windows(2).zip(f.values.windows(2)) {
        let (a0, a1) = (above(y[0]), above(y[1]));
        let len = x[1] - x[0];
        if a0 && a1 {
            m += len;
        } else if a0 != a1 {
            let s = (t - y[0]) / (y[1] - y[0]);
            m += if a0 { s * len } else { (1.0 - s) * len };
        }
    }
    m
}

/// Restriction to `[a, b]`, with interpolated end nodes.
pub fn restrict(f: &GridFunction, a: f64, b: f64) -> GridFunction {
    let mut xs = vec![a];
    let mut vs = vec![f.interp(a)];
    for (&x, &v) in f.xs.iter().zip(&f.values) {
        if x > a && x < b {
            xs.push(x);
            vs.push(v);
        }
    }
    xs.push(b);
    vs.push(f.interp(b));
    GridFunction::new(xs, vs)
}

pub fn translate(f: &GridFunction, dx: f64) -> GridFunction {
    GridFunction::new(f.xs.iter().map(|x| x + dx).collect(), f.values.clone())
}

/// Concatenates node lists, merging nodes closer than `tol`.
pub fn concat(parts: &[GridFunction], tol: f64) -> GridFunction {
    let mut xs: Vec<f64> = Vec::new();
    let mut vs: Vec<f64> = Vec::new();
    for p in parts {
        for (&x, &v) in p.xs.iter().zip(&p.values) {
            match xs.last() {
                Some(&last) if x <= last + tol => {
                    *vs.last_mut().unwrap() = v;
                }
                _ => {
                    xs.push(x);
                    vs.push(v);
                }
            }
        }
    }
    GridFunction::new(xs, vs)
}

/// Indices of strict interior local minima.
pub fn local_minima(f: &GridFunction) -> Vec<usize> {
    let v = &f.values;
    (1..v.len().saturating_sub(1))
        .filter(|&i| v[i - 1] > v[i] && v[i] < v[i + 1])
        .collect()
}

/// `∫ (f′)²`, exact.
pub fn dirichlet_energy(f: &GridFunction) -> f64 {
    f.xs.windows(2)
        .zip(f.values.windows(2))
        .map(|(x, y)| (y[1] - y[0]).powi(2) / (x[1] - x[0]))
        .sum()
}

/// `∫ f²`, exact.
pub fn l2_squared(f: &GridFunction) -> f64 {
    f.xs.windows(2)
        .zip(f.values.windows(2))
        .map(|(x, y)| (x[1] - x[0]) * (y[0] * y[0] + y[0] * y[1] + y[1] * y[1]) / 3.0)
        .sum()
}
