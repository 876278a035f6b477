//! Seeded generators for randomized checks.
//!
//! Class-𝒜 profiles are `ψ(x) = tan(s(x − x₀))/s + c + a(x − x₀) + Σ Jᵢ 1{x > xᵢ}`
//! with `s ∈ [1, 2]`, `a, Jᵢ ≥ 0`, finite on `|x − x₀| < π/(2s)` inside `I_π`.
//! `tan(su)/s = tan θ(u)` with `θ′ ≥ 1`, so increments dominate `2 tan(Δ/2)`;
//! adding constants and nondecreasing terms keeps that.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::oned::{GridFunction, Interval, MonotoneProfile, Weight1D};
use crate::rearrangement::TestFunction;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random member of 𝒜(I_π); see the module docs.
pub fn class_a_profile<R: Rng>(rng: &mut R) -> MonotoneProfile {
    let s = if rng.gen_bool(0.3) {
        1.0
    } else {
        rng.gen_range(1.0..2.0)
    };
    let half = FRAC_PI_2 / s;
    let x0 = rng.gen_range(-(FRAC_PI_2 - half)..=(FRAC_PI_2 - half));
    let c = if rng.gen_bool(0.5) {
        0.0
    } else {
        rng.gen_range(-1.0..1.0)
    };
    let a = if rng.gen_bool(0.5) {
        0.0
    } else {
        rng.gen_range(0.0..1.0)
    };
    let dom = Interval {
        a: x0 - half,
        b: x0 + half,
    };
    let mut psi = MonotoneProfile::analytic(
        dom,
        move |x| (s * (x - x0)).tan() / s + c + a * (x - x0),
        move |x| 1.0 + (s * (x - x0)).tan().powi(2) + a,
    )
    .expect("valid analytic profile");
    for _ in 0..rng.gen_range(0..=2) {
        let x = x0 + rng.gen_range(-0.8..0.8) * half;
        psi = psi
            .with_jump(x, rng.gen_range(0.05..1.0))
            .expect("jump inside the domain");
    }
    psi
}

/// `count` class-𝒜 profiles from one seed.
pub fn class_a_profiles(seed: u64, count: usize) -> Vec<MonotoneProfile> {
    let mut r = rng(seed);
    (0..count).map(|_| class_a_profile(&mut r)).collect()
}

/// Random test function on `I_π` supported on `support`, sampled on `n` cells
/// of `I_π`: a positive sum of Gaussian bumps tapered by a power of a sine.
pub fn test_function<R: Rng>(
    rng: &mut R,
    support: Interval,
    bumps: usize,
    n: usize,
) -> Result<TestFunction> {
    let c0 = rng.gen_range(0.05..0.5);
    let centres: Vec<(f64, f64, f64)> = (0..bumps)
        .map(|_| {
            (
                rng.gen_range(0.1..0.9),
                rng.gen_range(0.04..0.15),
                rng.gen_range(0.3..2.0),
            )
        })
        .collect();
    let p = rng.gen_range(0.5..2.0);
    let ip = Interval::i_pi();
    let f = move |x: f64| {
        if x <= support.a || x >= support.b {
            return 0.0;
        }
        let t = (x - support.a) / support.len();
        let body: f64 = c0
            + centres
                .iter()
                .map(|&(m, w, h)| h * (-((t - m) / w).powi(2)).exp())
                .sum::<f64>();
        (PI * t).sin().powf(p) * body
    };
    let mut g = GridFunction::sample(ip, n, f);
    // Make sure the support ends are nodes.
    for e in [support.a, support.b] {
        if g.xs.iter().all(|&x| (x - e).abs() > 1e-12) && ip.contains(e) {
            let i = g.xs.partition_point(|&x| x < e);
            g.xs.insert(i, e);
            g.values.insert(i, 0.0);
        }
    }
    TestFunction::new(g)
}

/// Random log-concave weight on `dom`: `exp(−α(x − m)² − βx) · cos^k` of the
/// rescaled variable.
pub fn log_concave_weight<R: Rng>(rng: &mut R, dom: Interval) -> Weight1D {
    let alpha = rng.gen_range(0.0..2.0);
    let beta = rng.gen_range(-1.0..1.0);
    let m = dom.a + rng.gen_range(0.2..0.8) * dom.len();
    let k = rng.gen_range(0.0..2.0);
    let (mid, half) = (dom.mid(), 0.5 * dom.len());
    Weight1D::analytic(dom, move |x| {
        let t = (x - mid) / half * 0.95 * FRAC_PI_2;
        (-alpha * (x - m).powi(2) - beta * x).exp() * t.cos().powf(k)
    })
}
