//! Acceptance gate. Runs every criterion, prints one line each, and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use gaplab_core::geometry::{shapes, ConvexPolygon, Vec2};
use gaplab_core::lab::{self, exponent_sweep, random_chords, verify_localized_on, Family, Mode};
use gaplab_core::oned::{
    check_bound_stima3, dirichlet_eig1, Interval, MeasurePotential, MonotoneProfile, Sampler,
    Weight1D,
};
use gaplab_core::partition::{equipartition, mean_value_bound, PartitionKind, WeightedField};
use gaplab_core::planar::{
    default_delta, dirichlet_eigs, gap_identity_check, improved_log_concavity_check, neumann_eig1,
    GridFunction2D,
};
use gaplab_core::rearrangement::{check_lemma_tilde, eta1_stratified, stratified};
use gaplab_core::sampling;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Least-squares slope of `y` against `x`.
fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// First zero of `J₀` from its power series.
fn bessel_j0_first_zero() -> f64 {
    let j0 = |x: f64| {
        let (mut term, mut sum) = (1.0f64, 1.0f64);
        for k in 1..60 {
            term *= -(x * x / 4.0) / (k * k) as f64;
            sum += term;
        }
        sum
    };
    let (mut a, mut b) = (2.0, 3.0);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if j0(a) * j0(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn quotient_field(p: &ConvexPolygon) -> (WeightedField, GridFunction2D) {
    let e = dirichlet_eigs(p, 2, default_delta(p)).unwrap();
    let (u1, u2) = (&e[0].function, &e[1].function);
    let phi: Vec<f64> = u1.values.iter().map(|v| v * v).collect();
    let q: Vec<f64> = u1
        .values
        .iter()
        .zip(&u2.values)
        .map(|(a, b)| b / a)
        .collect();
    let field = WeightedField::new(&GridFunction2D::new(u1.grid.clone(), q, false), phi)
        .unwrap()
        .with_zero_mean(p)
        .unwrap();
    (field, u1.clone())
}

fn sharp_1d_values() -> Outcome {
    let iv = Interval::i_pi();
    let cases: [(&str, f64, fn(f64) -> f64); 3] = [
        ("1+2tan²", 3.0, |x| 1.0 + 2.0 * x.tan().powi(2)),
        ("2tan²", 2.0, |x| 2.0 * x.tan().powi(2)),
        ("2(1+tan²)", 4.0, |x| 2.0 * (1.0 + x.tan().powi(2))),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, want, q) in cases {
        let t = Instant::now();
        let r = dirichlet_eig1(
            iv,
            &MeasurePotential::smooth(iv, Sampler::analytic(q)).unwrap(),
            4096,
        )
        .unwrap();
        let secs = t.elapsed().as_secs_f64();
        let err = (r.extrapolated_value - want).abs();
        pass &= err < 1e-3 && secs < 1.0;
        parts.push(format!("{name} err {err:.1e} in {secs:.2}s"));
    }
    outcome(pass, parts.join(", "))
}

fn class_a_minimality() -> Outcome {
    let t = Instant::now();
    let profiles = sampling::class_a_profiles(2024, 200);
    let mut violations = 0;
    let mut min = f64::INFINITY;
    for psi in &profiles {
        let r = check_bound_stima3(psi, 2048).unwrap();
        violations += usize::from(!r.pass);
        min = min.min(r.lambda.extrapolated);
    }
    let tan = check_bound_stima3(&MonotoneProfile::tan(), 2048)
        .unwrap()
        .lambda
        .extrapolated;
    let secs = t.elapsed().as_secs_f64();
    let pass = violations == 0 && (min - tan).abs() <= 1e-2 && secs < 120.0;
    outcome(
        pass,
        format!("{violations} violations, sample min {min:.6}, tan {tan:.6}, {secs:.1}s"),
    )
}

fn truncation_exponent() -> Outcome {
    let mut pts = Vec::new();
    let mut excluded = Vec::new();
    for k in 4..=8 {
        let d = PI * k as f64 / 8.0;
        let psi = MonotoneProfile::truncated_tan(d).unwrap();
        let r = dirichlet_eig1(Interval::i_pi(), &psi.potential(), 2048).unwrap();
        let excess = r.extrapolated_value - 3.0;
        if excess > r.tol() && PI - d > 0.0 {
            pts.push(((PI - d).ln(), excess.ln()));
        } else {
            excluded.push(k);
        }
    }
    let s = slope(&pts);
    outcome(
        (s - 3.0).abs() <= 0.3 && pts.len() >= 3,
        format!(
            "slope {s:.3} from {} points, excluded k = {excluded:?}",
            pts.len()
        ),
    )
}

fn rearrangement_inequality() -> Outcome {
    let mut rng = sampling::rng(414);
    let (mut hard, mut soft, mut vacuous) = (0, 0, 0);
    let mut worst = f64::INFINITY;
    for i in 0..200 {
        let psi = sampling::class_a_profile(&mut rng);
        let v = sampling::test_function(&mut rng, psi.dom(), 1 + i % 5, 400).unwrap();
        let r = check_lemma_tilde(&psi, &v).unwrap();
        if r.vacuous {
            vacuous += 1;
            continue;
        }
        let f = v.function();
        let dom = psi.dom();
        let density =
            f.xs.iter()
                .zip(&f.values)
                .filter(|(x, y)| **y != 0.0 && dom.a < **x && **x < dom.b)
                .map(|(x, _)| psi.ac_derivative(*x))
                .fold(0.0, f64::max);
        let tol = 2.0 * v.max_step() * v.max_abs().powi(2) * density;
        worst = worst.min(r.slack / r.rhs.abs().max(f64::MIN_POSITIVE));
        soft += usize::from(r.slack < 0.0);
        hard += usize::from(r.slack < -tol);
    }
    outcome(hard == 0, format!("{hard} hard, {soft} within tolerance, {vacuous} vacuous; min relative slack {worst:.2e}"))
}

fn stratified_eta() -> Outcome {
    let mut rng = sampling::rng(77);
    let mut worst = f64::INFINITY;
    let mut fails = 0;
    let mut empty = Vec::new();
    for i in 0..50 {
        let v = sampling::test_function(&mut rng, Interval::i_pi(), 1 + i % 5, 512).unwrap();
        let d = stratified(&v).unwrap();
        let r = eta1_stratified(&d.potential_sampler(), &d.constraints(), 512).unwrap();
        worst = worst.min(r.extrapolated - 4.0 + r.tol());
        fails += usize::from(r.extrapolated < 4.0 - r.tol());
        if d.gamma().is_empty() {
            empty.push(r.extrapolated);
        }
    }
    // A symmetric single bump has no branching.
    let bump = gaplab_core::rearrangement::TestFunction::sample(Interval::i_pi(), 512, |x| {
        x.cos().powi(2)
    })
    .unwrap();
    let d = stratified(&bump).unwrap();
    let r = eta1_stratified(&d.potential_sampler(), &d.constraints(), 512).unwrap();
    let mut empty_ok = d.gamma().is_empty();
    empty.push(r.extrapolated);
    empty_ok &= empty.iter().all(|e| (e - 4.0).abs() <= 1e-3);
    outcome(
        fails == 0 && empty_ok,
        format!("{fails} below 4 - tol, min margin {worst:.2e}; {} unbranched cases all within 1e-3 of 4: {empty_ok}", empty.len()),
    )
}

fn reference_spectra() -> Outcome {
    let pi2 = PI * PI;
    let sq = shapes::unit_square();
    let t = Instant::now();
    let e = dirichlet_eigs(&sq, 2, 1.0 / 120.0).unwrap();
    let m = neumann_eig1(&sq, 1.0 / 120.0).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let rel = |v: f64, w: f64| (v / w - 1.0).abs();
    let errs = [
        rel(e[0].extrapolated, 2.0 * pi2),
        rel(e[1].extrapolated, 5.0 * pi2),
        rel(m.extrapolated, pi2),
    ];
    let j = bessel_j0_first_zero();
    let disk = shapes::disk();
    let dk = dirichlet_eigs(&disk, 1, default_delta(&disk)).unwrap();
    let derr = rel(dk[0].extrapolated, j * j);
    let pass = errs.iter().all(|e| *e < 5e-3) && secs < 30.0 && derr < 5e-3;
    outcome(
        pass,
        format!(
            "square rel errs {:.1e} {:.1e} {:.1e} in {secs:.1}s; disk {:.5} vs j² {:.5} ({derr:.1e})",
            errs[0], errs[1], errs[2], dk[0].extrapolated, j * j
        ),
    )
}

fn gap_identity() -> Outcome {
    let mut doms = vec![
        ("square".to_string(), shapes::unit_square()),
        ("disk".to_string(), shapes::disk()),
    ];
    for s in 0..5 {
        doms.push((
            format!("hexagon{s}"),
            shapes::random_polygon(6, 500 + s).unwrap(),
        ));
    }
    let mut pass = true;
    let mut worst = 0.0f64;
    for (name, p) in &doms {
        let r = gap_identity_check(p, default_delta(p)).unwrap();
        if !r.pass {
            eprintln!("  {name}: spread {:.3e}", r.spread);
        }
        pass &= r.pass;
        worst = worst.max(r.spread);
    }
    outcome(
        pass,
        format!("{} domains, worst spread {worst:.2e}", doms.len()),
    )
}

fn neumann_expansion() -> Outcome {
    let r = exponent_sweep(Family::Rects, &[0.4, 0.2, 0.1, 0.05], Mode::Neumann, 40.0).unwrap();
    let e = r
        .entries
        .iter()
        .find(|e| (e.param - 0.05).abs() < 1e-12)
        .unwrap();
    let d = e.diameter;
    let ratio = e.excess * d.powi(4) / (PI * PI * 0.05f64.powi(2));
    let pass = (ratio - 1.0).abs() <= 0.05 && (r.slope - 2.0).abs() <= 0.1;
    outcome(
        pass,
        format!(
            "excess·D⁴/(π²ε²) = {ratio:.5} at ε = 0.05, slope {:.4}",
            r.slope
        ),
    )
}

fn gap_floor_and_rigidity() -> Outcome {
    let t = Instant::now();
    let (mut fails, mut degenerate) = (0, 0);
    let mut cbar = f64::INFINITY;
    for seed in 0..50u64 {
        let p = shapes::random_polygon(5 + (seed % 6) as usize, 1000 + seed).unwrap();
        let r = lab::verify_gap(&p, "random", default_delta(&p)).unwrap();
        fails += usize::from(!r.pass);
        if r.is_nondegenerate() {
            cbar = cbar.min(r.implied_cbar.unwrap());
        } else {
            degenerate += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        fails == 0 && secs < 600.0,
        format!(
            "{fails} failures, {degenerate} degenerate, min excess·D⁸/w⁶ {cbar:.4}, {secs:.1}s"
        ),
    )
}

fn equipartition_soundness() -> Outcome {
    let doms = [
        shapes::unit_square(),
        shapes::disk(),
        shapes::random_polygon(6, 4).unwrap(),
    ];
    let (mut mean, mut mass, mut ident) = (0.0f64, 0.0f64, 0.0f64);
    let (mut low, mut ineq) = (false, true);
    for p in &doms {
        let (field, u1) = quotient_field(p);
        let w = move |x: Vec2| u1.interp(x).powi(2);
        for n in [2, 4, 8, 16] {
            let part = equipartition(p, &field, n, PartitionKind::L2).unwrap();
            let (a, b) = part.worst_defect();
            mean = mean.max(a);
            mass = mass.max(b);
            low |= part.any_low_confidence();
            ident = ident.max(part.identity_residual());
            if n <= 4 {
                ineq &= mean_value_bound(&part, &w, 40.0).unwrap().inequality_holds;
            }
        }
    }
    let pass = mean <= 1e-6 && mass <= 1e-6 && ident <= 1e-6 && !low;
    outcome(
        pass,
        format!("worst mean defect {mean:.1e}, mass defect {mass:.1e}, identity {ident:.1e}; cell eigenvalue average below global quotient for n <= 4: {ineq}"),
    )
}

fn improved_log_concavity() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, p) in [("square", shapes::unit_square()), ("disk", shapes::disk())] {
        let delta = default_delta(&p);
        let e = dirichlet_eigs(&p, 1, delta).unwrap();
        let d = p.diameter().length;
        let r = improved_log_concavity_check(&e[0].function, 100, delta * (PI / d).powi(2), 9);
        pass &= r.violations == 0;
        parts.push(format!("{name} {} violations", r.violations));
    }
    outcome(pass, parts.join(", "))
}

fn localized_chords() -> Outcome {
    let mut total = 0;
    let mut fails = 0;
    let mut worst = f64::INFINITY;
    for (i, p) in [
        shapes::unit_square(),
        shapes::disk(),
        shapes::random_polygon(6, 4).unwrap(),
    ]
    .iter()
    .enumerate()
    {
        let e = dirichlet_eigs(p, 1, default_delta(p)).unwrap();
        let rel = e[0].error_estimate / e[0].extrapolated;
        for c in random_chords(p, 20, 31 + i as u64) {
            let h = Weight1D::constant(Interval::new(0.0, c.length).unwrap(), 1.0);
            let r = verify_localized_on(p, &e[0].function, rel, &c, &h, 1.0).unwrap();
            total += 1;
            fails += usize::from(!r.pass);
            worst = worst.min(r.excess / r.floor);
        }
    }
    outcome(
        fails == 0,
        format!("{fails} of {total} chords below the floor; min excess/floor {worst:.3}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("1D sharp values", sharp_1d_values),
        ("class-A minimality", class_a_minimality),
        ("truncation exponent", truncation_exponent),
        ("rearrangement inequality", rearrangement_inequality),
        ("stratified potential bound", stratified_eta),
        ("2D reference spectra", reference_spectra),
        ("gap identity", gap_identity),
        ("Neumann expansion", neumann_expansion),
        ("gap floor and rigidity", gap_floor_and_rigidity),
        ("equipartition soundness", equipartition_soundness),
        ("improved log-concavity", improved_log_concavity),
        ("localized inequality", localized_chords),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {}: {} ({}; {:.1}s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
