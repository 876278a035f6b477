use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use super::*;
use crate::oned::{dirichlet_eig1, MeasurePotential};
use crate::sampling;

fn ip() -> Interval {
    Interval::i_pi()
}

fn tent(x: f64, c: f64, r: f64, h: f64) -> f64 {
    (h * (1.0 - (x - c).abs() / r)).max(0.0)
}

/// `|{f > t}|` by dense midpoint sampling.
fn histogram(f: &GridFunction, t: f64) -> f64 {
    let (a, b) = (f.xs[0], *f.xs.last().unwrap());
    let m = 200_000;
    let h = (b - a) / m as f64;
    (0..m)
        .filter(|&i| f.interp(a + (i as f64 + 0.5) * h) > t)
        .count() as f64
        * h
}

fn three_bumps() -> TestFunction {
    TestFunction::sample(ip(), 600, |x| {
        if x.abs() >= FRAC_PI_2 {
            0.0
        } else {
            tent(x, -1.0, 0.6, 1.0)
                + tent(x, 0.0, 0.6, 2.0)
                + tent(x, 1.0, 0.6, 1.5)
                + 0.3 * x.cos()
        }
    })
    .unwrap()
}

#[test]
fn rejects_bad_test_functions() {
    let g = GridFunction::sample(ip(), 10, |x| x);
    assert!(TestFunction::new(g).is_err());
    let g = GridFunction::sample(ip(), 10, |x| -x.cos());
    assert!(TestFunction::new(g).is_err());
    let g = GridFunction::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 1.0, 0.0]);
    assert!(TestFunction::new(g).is_err());
}

#[test]
fn symmetric_input_is_fixed() {
    let v = TestFunction::sample(ip(), 200, |x| x.cos().powi(2)).unwrap();
    let s = symmetric_decreasing(v.function(), ip());
    for i in 0..=200 {
        let x = -FRAC_PI_2 + PI * i as f64 / 200.0;
        assert!((s.interp(x) - v.function().interp(x)).abs() < 1e-12);
    }
    let t = TestFunction::sample(ip(), 64, |x| tent(x, 0.0, FRAC_PI_2, 1.0)).unwrap();
    let s = symmetric_decreasing(t.function(), ip());
    for &x in &t.function().xs {
        assert!((s.interp(x) - t.function().interp(x)).abs() < 1e-12);
    }
}

#[test]
fn asymmetric_tent_becomes_symmetric_tent() {
    // Peak at −1: the rearranged tent has the same height and base.
    let f = GridFunction::new(vec![-FRAC_PI_2, -1.0, FRAC_PI_2], vec![0.0, 2.0, 0.0]);
    let s = symmetric_decreasing(&f, ip());
    for k in 1..20 {
        let t = 0.1 * k as f64;
        assert!((histogram(&s, t) - histogram(&f, t)).abs() < 1e-4);
    }
    for i in 0..=50 {
        let x = -FRAC_PI_2 + PI * i as f64 / 50.0;
        assert!((s.interp(x) - tent(x, 0.0, FRAC_PI_2, 2.0)).abs() < 1e-12);
    }
}

#[test]
fn single_bump_blocked_is_symmetric_decreasing() {
    let v = TestFunction::sample(ip(), 300, |x| {
        tent(x, 0.4, 1.0, 1.0) + 0.2 * x.cos().max(0.0)
    })
    .unwrap();
    let b = blocked_rearrangement(v.function(), ip()).unwrap();
    assert!(b.split.is_none());
    let s = symmetric_decreasing(v.function(), ip());
    for i in 0..=100 {
        let x = -FRAC_PI_2 + PI * i as f64 / 100.0;
        assert!((b.function.interp(x) - s.interp(x)).abs() < 1e-12);
    }
}

#[test]
fn minimum_at_boundary_level_is_case_one() {
    let v = TestFunction::sample(ip(), 300, |x| {
        tent(x, -0.8, 0.6, 1.0) + tent(x, 0.8, 0.6, 2.0)
    })
    .unwrap();
    assert!(blocked_rearrangement(v.function(), ip())
        .unwrap()
        .split
        .is_none());
}

#[test]
fn double_bump_blocked() {
    let v = TestFunction::sample(ip(), 400, |x| {
        tent(x, -0.7, 0.8, 1.0) + tent(x, 0.6, 0.8, 2.0) + 0.5 * x.cos().max(0.0)
    })
    .unwrap();
    let f = v.function();
    let b = blocked_rearrangement(f, ip()).unwrap();
    let (ell, j1, j2) = b.split.unwrap();
    assert!((j1.b - j2.a).abs() < 1e-15);
    // The central block is centred on I_π and has the length of {v > ℓ}.
    assert!((j1.a + j2.b).abs() < 1e-12);
    assert!(((j2.b - j1.a) - histogram(f, ell)).abs() < 1e-4);
    for k in 0..40 {
        let t = ell * k as f64 / 40.0;
        assert!(
            (histogram(&b.function, t) - histogram(f, t)).abs() < 1e-4,
            "level {t}"
        );
    }
    // Below ℓ the profile is symmetric decreasing.
    let s = symmetric_decreasing(f, ip());
    for i in 0..=40 {
        let x = -FRAC_PI_2 + (j1.a + FRAC_PI_2) * i as f64 / 40.0;
        assert!((b.function.interp(x) - s.interp(x)).abs() < 1e-12);
        assert!((b.function.interp(-x) - s.interp(-x)).abs() < 1e-12);
    }
    // Above ℓ it is the translated original.
    let shift = j1.b - f.xs[pl::local_minima(f)[0]];
    for i in 0..=40 {
        let x = j1.a + (j2.b - j1.a) * i as f64 / 40.0;
        assert!((b.function.interp(x) - f.interp(x - shift)).abs() < 1e-12);
    }
}

#[test]
fn unimodal_has_no_branching() {
    let v = TestFunction::sample(ip(), 300, |x| x.cos().powi(2) * (1.0 + 0.3 * x)).unwrap();
    let d = stratified(&v).unwrap();
    assert!(d.gamma().is_empty());
    assert_eq!(d.nodes.len(), 1);
    for x in [-1.5, -0.3, 0.0, 1.2] {
        assert!((d.potential(x) - (1.0 + x.tan().powi(2))).abs() < 1e-12);
    }
}

#[test]
fn three_bump_tree() {
    let d = stratified(&three_bumps()).unwrap();
    let alphas: Vec<Vec<u8>> = d.nodes.iter().map(|n| n.alpha.clone()).collect();
    assert_eq!(
        alphas,
        vec![
            vec![1],
            vec![1, 1],
            vec![1, 2],
            vec![1, 2, 1],
            vec![1, 2, 2]
        ]
    );
    assert_eq!(d.gamma(), vec![vec![1], vec![1, 2]]);
    let r = &d.rearranged;
    for leaf in d.leaves() {
        let (m, half) = (leaf.interval.mid(), 0.5 * leaf.interval.len());
        for k in 0..=20 {
            let s = half * k as f64 / 20.0;
            assert!((r.interp(m - s) - r.interp(m + s)).abs() < 1e-9);
        }
    }
    assert_eq!(d.constraints().len(), 2);
}

fn twin_bumps() -> TestFunction {
    let g = |x: f64| (-(x / 0.3).powi(2)).exp();
    TestFunction::sample(ip(), 400, |x| {
        x.cos().max(0.0) * (0.2 + g(x - 0.75) + g(x + 0.75))
    })
    .unwrap()
}

#[test]
fn equal_bumps_split_evenly() {
    let v = twin_bumps();
    let d = stratified(&v).unwrap();
    assert_eq!(d.gamma(), vec![vec![1]]);
    let (c1, c2) = d.root().children.unwrap();
    let (l1, l2) = (d.nodes[c1].interval.len(), d.nodes[c2].interval.len());
    assert!((l1 - l2).abs() < 1e-9, "{l1} {l2}");
}

#[test]
fn lemma_tilde_identity_for_tan() {
    let v = TestFunction::sample(ip(), 400, |x| x.cos().powi(2)).unwrap();
    let r = check_lemma_tilde(&MonotoneProfile::tan(), &v).unwrap();
    assert!(!r.vacuous);
    assert!((r.lhs - r.rhs).abs() < 1e-9 * r.rhs);
    // ∫ (1 + tan²x) cos⁴x = π/2 up to the piecewise-linear sampling.
    assert!((r.rhs - FRAC_PI_2).abs() < 1e-4);
}

#[test]
fn lemma_tilde_slack_with_two_minima() {
    let psi = MonotoneProfile::tan().with_jump(0.3, 0.5).unwrap();
    let r = check_lemma_tilde(&psi, &three_bumps()).unwrap();
    assert_eq!(r.gamma_size, 2);
    assert!(r.slack > 0.0);
}

#[test]
fn lemma_tilde_vacuous_off_domain() {
    let psi = MonotoneProfile::truncated_tan(2.0).unwrap();
    let v = TestFunction::sample(ip(), 200, |x| x.cos().powi(2)).unwrap();
    let r = check_lemma_tilde(&psi, &v).unwrap();
    assert!(r.vacuous && r.lhs.is_infinite());
}

#[test]
fn eta_without_branching_is_four() {
    let v = Sampler::analytic(|x: f64| 1.0 + x.tan().powi(2));
    let r = eta1_stratified(&v, &[], 512).unwrap();
    assert!((r.extrapolated - 4.0).abs() < 1e-6);
    let g = &r.eigenfunction;
    let peak = g.max_abs();
    for (&x, &y) in g.xs.iter().zip(&g.values) {
        assert!((y / peak - x.cos().powi(2)).abs() < 1e-3);
    }
}

#[test]
fn eta_with_symmetric_branching_exceeds_four() {
    let v = twin_bumps();
    let d = stratified(&v).unwrap();
    let r = eta1_stratified(&d.potential_sampler(), &d.constraints(), 512).unwrap();
    assert!(r.extrapolated - 4.0 > 100.0 * r.tol());
}

#[test]
fn eta_without_constraints_matches_dirichlet_solver() {
    let q = |x: f64| 1.0 + 0.5 * x * x + 0.3 * x;
    let r = eta1_stratified(&Sampler::analytic(q), &[], 512).unwrap();
    let pot = MeasurePotential::smooth(ip(), Sampler::analytic(move |x| 2.0 * q(x))).unwrap();
    let o = dirichlet_eig1(ip(), &pot, 2048).unwrap();
    assert!((r.extrapolated - o.extrapolated_value).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rearrangement_invariants(seed in 0u64..10_000, bumps in 1usize..6) {
        let mut r = sampling::rng(seed);
        let v = sampling::test_function(&mut r, ip(), bumps, 400).unwrap();
        let f = v.function();
        let d = stratified(&v).unwrap();
        let dx = v.max_step();
        let top = v.max_abs();
        for k in 0..64 {
            let t = top * k as f64 / 64.0;
            prop_assert!((pl::level_measure(f, t, true) - pl::level_measure(&d.rearranged, t, true)).abs() <= 2.0 * dx);
        }
        let (e0, e1) = (pl::dirichlet_energy(f), pl::dirichlet_energy(&d.rearranged));
        prop_assert!(e1 <= e0 * (1.0 + 1e-9));
        let (l0, l1) = (pl::l2_squared(f), pl::l2_squared(&d.rearranged));
        prop_assert!((l0 - l1).abs() <= 1e-9 * l0);
        // Tree nesting, disjoint children, and shells filling the root.
        let mut shells = 0.0;
        for n in &d.nodes {
            let mut inner = 0.0;
            if let Some((c1, c2)) = n.children {
                let (i1, i2) = (d.nodes[c1].interval, d.nodes[c2].interval);
                prop_assert!(i1.is_subset_of(&n.interval, 1e-12) && i2.is_subset_of(&n.interval, 1e-12));
                prop_assert!(i1.b <= i2.a + 1e-12);
                inner = i1.len() + i2.len();
            }
            shells += n.interval.len() - inner;
        }
        prop_assert!((shells - PI).abs() < 1e-9);
    }

    #[test]
    fn lemma_tilde_holds(seed in 0u64..10_000) {
        let mut r = sampling::rng(seed);
        let psi = sampling::class_a_profile(&mut r);
        let v = sampling::test_function(&mut r, psi.dom(), 3, 400).unwrap();
        let rep = check_lemma_tilde(&psi, &v).unwrap();
        prop_assert!(rep.slack >= -1e-9 * rep.rhs);
    }
}
