use std::f64::consts::PI;

use super::*;
use crate::geometry::{shapes, Chord, Vec2};
use crate::oned::{Interval, Weight1D};

#[test]
fn square_gap_and_neumann() {
    let sq = shapes::unit_square();
    let g = verify_gap(&sq, "square", 1.0 / 80.0).unwrap();
    let gap = g.gap.unwrap();
    assert!(
        (gap.extrapolated - 3.0 * PI * PI).abs() < 1e-3 * 3.0 * PI * PI,
        "{gap:?}"
    );
    assert!((g.gap_excess.unwrap() - 1.5 * PI * PI).abs() < 0.05);
    assert!(g.pass && g.checks.len() == 2);
    let n = verify_neumann(&sq, "square", 1.0 / 80.0).unwrap();
    assert!((n.mu1.unwrap().extrapolated - PI * PI).abs() < 1e-3 * PI * PI);
    assert!(n.pass);
}

#[test]
fn rectangle_gap_is_three() {
    let eps = 0.5;
    let r = shapes::rect(PI, eps);
    let g = verify_gap(&r, "rect", eps / 40.0).unwrap();
    let gap = g.gap.unwrap().extrapolated;
    assert!((gap - 3.0).abs() < 1e-5, "{gap}");
    let want = 3.0 * eps * eps / (PI * PI + eps * eps);
    assert!((g.gap_excess.unwrap() - want).abs() < 1e-5);
    assert!(g.pass);
}

#[test]
fn localized_full_and_short_chords() {
    let sq = shapes::unit_square();
    let e = crate::planar::dirichlet_eigs(&sq, 1, 1.0 / 60.0).unwrap();
    let u1 = &e[0].function;
    let diag = Chord::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0));
    let h = Weight1D::constant(Interval::new(0.0, diag.length).unwrap(), 1.0);
    let r = verify_localized_on(&sq, u1, 0.0, &diag, &h, 1.0).unwrap();
    // Along the diagonal the weight is sin⁴(πs/D), whose first eigenvalue is 5π²/D².
    assert!(
        (r.mu1_extrapolated - 2.5 * PI * PI).abs() < 0.02 * 2.5 * PI * PI,
        "{}",
        r.mu1_extrapolated
    );
    assert!(r.pass);
    let short = Chord::new(Vec2::new(0.3, 0.5), Vec2::new(0.7, 0.5));
    let h = Weight1D::constant(Interval::new(0.0, short.length).unwrap(), 1.0);
    let r = verify_localized_on(&sq, u1, 0.0, &short, &h, 1.0).unwrap();
    assert!(r.excess > 10.0 && r.implied_c.unwrap() > 0.0);
}

#[test]
fn localized_rejects_nonconcave_h() {
    let sq = shapes::unit_square();
    let e = crate::planar::dirichlet_eigs(&sq, 1, 1.0 / 40.0).unwrap();
    let c = Chord::new(Vec2::new(0.1, 0.5), Vec2::new(0.9, 0.5));
    let h = Weight1D::analytic(Interval::new(0.0, c.length).unwrap(), |s| {
        1.0 + (s - 0.4).powi(2)
    });
    let r = verify_localized_on(&sq, &e[0].function, 0.0, &c, &h, 1.0);
    assert!(matches!(r, Err(crate::GapError::Precondition(_))));
}

#[test]
fn random_chords_stay_inside() {
    let p = shapes::random_polygon(6, 11).unwrap();
    for c in random_chords(&p, 20, 5) {
        assert!(p.contains(c.a) && p.contains(c.b));
    }
}

#[test]
fn sweep_needs_four_points() {
    let r = exponent_sweep(Family::Rects, &[0.5, 0.4, 0.3], Mode::Neumann, 40.0);
    assert!(matches!(r, Err(crate::GapError::FitUnderdetermined { .. })));
}

#[test]
fn family_parsing_round_trips() {
    for f in [
        Family::Rects,
        Family::Sectors,
        Family::Ngons(5),
        Family::Random { k: 7, seed: 3 },
    ] {
        assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
    }
    assert!("blobs".parse::<Family>().is_err());
}

#[test]
fn plain_diamond_beats_its_floor() {
    let r = schrodinger_counterexample(f64::INFINITY, 0.3, 2f64.sqrt() / 50.0).unwrap();
    assert!(r.gap.extrapolated > r.floor + 3.0 * r.gap.error_estimate);
    let same = schrodinger_counterexample(1.0, 1.0, 2f64.sqrt() / 50.0).unwrap();
    assert_eq!(same.gap.fine, r.gap.fine);
}
