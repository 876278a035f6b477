/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre rule over the sorted breakpoints, `sub` panels per piece.
pub fn integrate(breaks: &[f64], sub: usize, rule: &[(f64, f64)], f: impl Fn(f64) -> f64) -> f64 {
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let h = (w[1] - w[0]) / sub as f64;
        if h <= 0.0 {
            continue;
        }
        for s in 0..sub {
            let a = w[0] + s as f64 * h;
            let c = a + 0.5 * h;
            total += rule
                .iter()
                .map(|&(x, wt)| wt * f(c + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let r = gauss_legendre(10);
        let s: f64 = r.iter().map(|p| p.1).sum();
        assert!((s - 2.0).abs() < 1e-14);
        let v = integrate(&[0.0, 1.0, 3.0], 1, &r, |x| x.powi(19));
        assert!((v - 3f64.powi(20) / 20.0).abs() < 1e-6 * 3f64.powi(20) / 20.0);
    }
}
