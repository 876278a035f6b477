use std::f64::consts::{FRAC_PI_2, PI};

use gaplab_core::oned::*;
use gaplab_core::sampling;
use gaplab_core::GapError;
use proptest::prelude::*;
use rand::Rng;

fn ip() -> Interval {
    Interval::i_pi()
}

fn smooth(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> MeasurePotential {
    MeasurePotential::smooth(ip(), Sampler::analytic(f)).unwrap()
}

/// Shooting oracle: RK4 on `v″ = (q − λ)v` from the left end, bisection on the
/// sign of `v(b)` between eigenvalue brackets.
fn shooting(q: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let end = |lam: f64| {
        let steps = 20_000;
        let h = (b - a) / steps as f64;
        let (mut x, mut v, mut w) = (a, 0.0f64, 1.0f64);
        let mut crossings = 0;
        for _ in 0..steps {
            let f = |x: f64, v: f64, w: f64| (w, (q(x) - lam) * v);
            let k1 = f(x, v, w);
            let k2 = f(x + 0.5 * h, v + 0.5 * h * k1.0, w + 0.5 * h * k1.1);
            let k3 = f(x + 0.5 * h, v + 0.5 * h * k2.0, w + 0.5 * h * k2.1);
            let k4 = f(x + h, v + h * k3.0, w + h * k3.1);
            let nv = v + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            w += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            if nv * v < 0.0 {
                crossings += 1;
            }
            v = nv;
            x += h;
        }
        (crossings, v)
    };
    // λ below λ₁ gives no interior zero and v(b) > 0.
    let (mut lo, mut hi) = (0.0, 1.0);
    while end(hi).0 == 0 && end(hi).1 > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (c, v) = end(mid);
        if c == 0 && v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn sharp_benchmarks_of_the_tan_family() {
    for (f, want) in [
        (
            Box::new(|x: f64| 1.0 + 2.0 * x.tan().powi(2)) as Box<dyn Fn(f64) -> f64 + Send + Sync>,
            3.0,
        ),
        (Box::new(|x: f64| 2.0 * x.tan().powi(2)), 2.0),
        (Box::new(|x: f64| 2.0 * (1.0 + x.tan().powi(2))), 4.0),
    ] {
        let r = dirichlet_eig1(ip(), &smooth(f), 4096).unwrap();
        assert!(
            (r.extrapolated_value - want).abs() < 1e-6,
            "{} vs {want}",
            r.extrapolated_value
        );
        let peak = r.eigenfunction.max_abs();
        for (&x, &v) in r.eigenfunction.xs.iter().zip(&r.eigenfunction.values) {
            assert!((v / peak - x.cos().powi(2)).abs() < 1e-3);
        }
    }
}

#[test]
fn free_interval_is_one() {
    let r = dirichlet_eig1(ip(), &MeasurePotential::zero(ip()), 512).unwrap();
    assert!((r.extrapolated_value - 1.0).abs() < 1e-9);
}

#[test]
fn matches_shooting_on_random_polynomials() {
    let mut rng = sampling::rng(31);
    let n = 2048;
    let dx = PI / n as f64;
    for _ in 0..10 {
        let c: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..2.0)).collect();
        let q =
            move |x: f64| c[0] + c[1] * x * x + c[2] * (x + 0.5 * c[3]).powi(2) + c[3] * x.powi(4);
        let r = dirichlet_eig1(ip(), &smooth(q.clone()), n).unwrap();
        let oracle = shooting(&q, -FRAC_PI_2, FRAC_PI_2);
        assert!(
            (r.value - oracle).abs() < 5.0 * dx * dx * oracle.max(1.0),
            "{} vs {oracle}",
            r.value
        );
        assert!((r.extrapolated_value - oracle).abs() < 1e-7 * oracle.max(1.0));
    }
}

#[test]
fn single_atom_matches_transcendental_equation() {
    // Atom of mass m at 0: tan(k π/2) = −2k/m for the even ground state.
    let m = 1.5;
    let q = MeasurePotential::new(ip(), Sampler::Constant(0.0), vec![(0.0, m)], ip()).unwrap();
    let r = dirichlet_eig1(ip(), &q, 2048).unwrap();
    let g = |k: f64| (k * FRAC_PI_2).tan() + 2.0 * k / m;
    let (mut lo, mut hi) = (1.0 + 1e-12, 2.0 - 1e-12);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(lo) * g(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let k = 0.5 * (lo + hi);
    // Lumping an atom between two centers is locally first order.
    assert!(
        (r.extrapolated_value - k * k).abs() < 5e-4,
        "{} vs {}",
        r.extrapolated_value,
        k * k
    );
}

#[test]
fn richardson_error_shrinks_on_tan_benchmark() {
    let q = smooth(|x: f64| 1.0 + 2.0 * x.tan().powi(2));
    let e: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| {
            let r = dirichlet_eig1(ip(), &q, n).unwrap();
            (r.extrapolated_value - r.value).abs()
        })
        .collect();
    assert!(e[0] / e[1] >= 3.0 && e[1] / e[2] >= 3.0, "{e:?}");
}

#[test]
fn truncated_domain_restricts_the_problem() {
    let psi = MonotoneProfile::truncated_tan(PI / 2.0).unwrap();
    let r = dirichlet_eig1(ip(), &psi.potential(), 1024).unwrap();
    let direct = dirichlet_eig1(
        Interval::centered(PI / 2.0).unwrap(),
        &MeasurePotential::smooth(
            Interval::centered(PI / 2.0).unwrap(),
            Sampler::analytic(|x: f64| 1.0 + 2.0 * x.tan().powi(2)),
        )
        .unwrap(),
        1024,
    )
    .unwrap();
    assert!((r.extrapolated_value - direct.extrapolated_value).abs() < 1e-9);
    assert!(r.extrapolated_value > 3.0 + 1.0);
}

#[test]
fn class_a_membership() {
    assert!(is_in_class_a(&MonotoneProfile::tan(), 256).member);
    let half = MonotoneProfile::tan().affine_image(0.5, 0.0);
    assert!(!is_in_class_a(&half, 256).member);
    for p in sampling::class_a_profiles(5, 20) {
        assert!(is_in_class_a(&p, 256).member, "{p:?}");
    }
}

#[test]
fn bounds_reject_profiles_outside_class_a() {
    let half = MonotoneProfile::tan().affine_image(0.5, 0.0);
    assert!(matches!(
        check_bound_stima3(&half, 512),
        Err(GapError::Precondition(_))
    ));
}

#[test]
fn split_bounds_on_random_profiles() {
    for p in sampling::class_a_profiles(8, 15) {
        let r = check_split_bounds(&p, 1024).unwrap();
        assert!(r.pass(), "{p:?}: {r:?}");
    }
    let tan = check_split_bounds(&MonotoneProfile::tan(), 2048).unwrap();
    assert!((tan.lambda_two_sq.extrapolated - 2.0).abs() < 1e-5);
    assert!((tan.lambda_two_derivative.extrapolated - 4.0).abs() < 1e-5);
}

#[test]
fn weighted_neumann_with_cosine_square_weight() {
    // −(cos² v′)′ = μ cos² v has v = sin x with μ = 3.
    let p = Weight1D::analytic(ip(), |x: f64| x.cos().powi(2));
    let r = neumann_weighted_eig1(ip(), &p, 2048).unwrap();
    assert!(
        (r.extrapolated_value - 3.0).abs() < 1e-4,
        "{}",
        r.extrapolated_value
    );
    let c = Weight1D::constant(Interval::new(0.0, 2.0).unwrap(), 1.0);
    let r = neumann_weighted_eig1(c.dom, &c, 512).unwrap();
    assert!((r.extrapolated_value - PI * PI / 4.0).abs() < 1e-8);
}

#[test]
fn weight_measure_of_cosine_square_is_tan() {
    let p = Weight1D::analytic(ip(), |x: f64| x.cos().powi(2));
    let (psi, m) = measure_from_weight(&p, 2048).unwrap();
    for x in [-1.0, -0.3, 0.0, 0.5, 1.2] {
        assert!((psi.value(x) - x.tan()).abs() < 1e-3 * (1.0 + x.tan().abs()));
        assert!(
            (m.density.eval(x) - (1.0 + 2.0 * x.tan().powi(2))).abs()
                < 1e-2 * (1.0 + x.tan().powi(2))
        );
    }
}

#[test]
fn measure_from_weight_rejects_log_convex() {
    let p = Weight1D::analytic(ip(), |x: f64| (x * x).exp());
    assert!(matches!(
        measure_from_weight(&p, 256),
        Err(GapError::NotLogConcave { .. })
    ));
}

#[test]
fn neumann_dominates_measure_potential_for_log_concave_weights() {
    let mut rng = sampling::rng(12);
    for _ in 0..20 {
        let p = sampling::log_concave_weight(&mut rng, ip());
        let mu = neumann_weighted_eig1(ip(), &p, 1024).unwrap();
        let (_, m) = measure_from_weight(&p, 1024).unwrap();
        let lam = dirichlet_eig1(ip(), &m, 1024).unwrap();
        assert!(
            mu.extrapolated_value >= lam.extrapolated_value - mu.tol() - lam.tol() - 1e-3,
            "{} < {}",
            mu.extrapolated_value,
            lam.extrapolated_value
        );
    }
}

#[test]
fn invalid_grid_sizes() {
    assert!(dirichlet_eig1(ip(), &MeasurePotential::zero(ip()), 8).is_err());
}

fn poly(c: [f64; 3]) -> impl Fn(f64) -> f64 + Clone + Send + Sync + 'static {
    move |x: f64| c[0] + c[1] * x * x + c[2] * (1.0 + x).powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monotone_in_the_potential(a in 0.0f64..3.0, b in 0.0f64..3.0, c in 0.0f64..3.0, extra in 0.0f64..2.0) {
        let q1 = poly([a, b, c]);
        let q2 = poly([a + extra, b, c]);
        let l1 = dirichlet_eig1(ip(), &smooth(q1), 512).unwrap();
        let l2 = dirichlet_eig1(ip(), &smooth(q2), 512).unwrap();
        prop_assert!(l1.extrapolated_value <= l2.extrapolated_value + l1.tol() + l2.tol());
    }

    #[test]
    fn monotone_in_the_domain(a in 0.0f64..3.0, b in 0.0f64..3.0, lo in 0.0f64..1.0, hi in 0.0f64..1.0) {
        let q = poly([a, b, 0.5]);
        let big = dirichlet_eig1(ip(), &smooth(q.clone()), 512).unwrap();
        let sub = Interval::new(-FRAC_PI_2 + lo, FRAC_PI_2 - hi).unwrap();
        let small = dirichlet_eig1(sub, &smooth(q), 512).unwrap();
        prop_assert!(small.extrapolated_value >= big.extrapolated_value - small.tol() - big.tol());
    }

    #[test]
    fn concave_in_the_potential(c1 in prop::array::uniform3(0.0f64..3.0), c2 in prop::array::uniform3(0.0f64..3.0)) {
        let l = |c: [f64; 3]| dirichlet_eig1(ip(), &smooth(poly(c)), 512).unwrap();
        let (r1, r2) = (l(c1), l(c2));
        for t in [0.25, 0.5, 0.75] {
            let mix = [0, 1, 2].map(|i| (1.0 - t) * c1[i] + t * c2[i]);
            let rm = l(mix);
            let lin = (1.0 - t) * r1.extrapolated_value + t * r2.extrapolated_value;
            prop_assert!(rm.extrapolated_value >= lin - rm.tol() - r1.tol() - r2.tol());
        }
    }

    #[test]
    fn class_a_profiles_clear_three(seed in 0u64..100_000) {
        let mut r = sampling::rng(seed);
        let p = sampling::class_a_profile(&mut r);
        let rep = check_bound_stima3(&p, 1024).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }
}
