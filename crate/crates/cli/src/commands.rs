use std::f64::consts::PI;
use std::fs;

use gaplab_core::geometry::{Chord, ConvexPolygon, Vec2};
use gaplab_core::lab::{
    self, fit_sweep, random_chords, sweep_member, verify_localized_on, Check, Family, Mode,
};
use gaplab_core::oned::{
    dirichlet_eig1, GridFunction, Interval, MeasurePotential, MonotoneProfile, Sampler, Weight1D,
};
use gaplab_core::partition::{
    cell_diagnostics, equipartition, mean_value_bound, section_lower_bound_check, PartitionKind,
    WeightedField, EPS_PART,
};
use gaplab_core::planar::{default_delta, dirichlet_eigs, neumann_eig1, GridFunction2D};
use gaplab_core::rearrangement::{eta1_stratified, stratified, TestFunction};
use gaplab_core::sampling;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::domain;
use crate::plot::{self, Overlay};
use crate::report::{emit, num, to_value, write_file, Report, Table};
use crate::{
    CheckArgs, LocalizedArgs, Output, PartitionArgs, RearrangeArgs, Solve1dArgs, Solve2dArgs,
    SweepArgs,
};

type CmdResult = Result<bool, String>;

const TOL_POLICY: &str = "3 x two-grid error estimate";

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Writes the report, the table and the SVG files, and returns the verdict.
fn finish(
    report: &Report,
    out: &Output,
    table: Option<Table>,
    svgs: Vec<(String, String)>,
) -> CmdResult {
    emit(out.out.as_deref(), &report.to_json())?;
    if let (Some(path), Some(t)) = (&out.csv, table) {
        write_file(path, &t.render())?;
    }
    if let Some(dir) = &out.svg {
        for (name, body) in svgs {
            write_file(&dir.join(&name), &body)?;
        }
    }
    Ok(report.pass)
}

fn config_with_delta<T: serde::Serialize>(args: &T, domain: &str, delta: f64) -> Value {
    let mut c = to_value(args);
    c["domain"] = json!(domain);
    c["delta"] = json!(delta);
    c
}

fn resolve_delta(p: &ConvexPolygon, delta: Option<f64>) -> Result<f64, String> {
    match delta {
        Some(d) if !(d > 0.0) => Err(format!("--delta must be positive, got {d}")),
        Some(d) => Ok(d),
        None => Ok(default_delta(p)),
    }
}

fn check_json(name: &str, value: f64, target: f64, tol: f64) -> Value {
    json!({ "name": name, "value": value, "target": target, "tol": tol, "pass": (value - target).abs() <= tol })
}

pub fn solve_1d(a: &Solve1dArgs) -> CmdResult {
    let ip = Interval::i_pi();
    let smooth = |q: fn(f64) -> f64| MeasurePotential::smooth(ip, Sampler::analytic(q));
    let (q, expected, floor) = match a.potential.as_str() {
        "tan3" => (smooth(|x| 1.0 + 2.0 * x.tan().powi(2)), Some(3.0), None),
        "tan2" => (smooth(|x| 2.0 * x.tan().powi(2)), Some(2.0), None),
        "tan4" => (smooth(|x| 2.0 * (1.0 + x.tan().powi(2))), Some(4.0), None),
        "free" => (Ok(MeasurePotential::zero(ip)), Some(1.0), None),
        s if s.starts_with("truncated:") => {
            let d: f64 = s["truncated:".len()..]
                .parse()
                .map_err(|_| format!("bad length in `{s}`"))?;
            (
                MonotoneProfile::truncated_tan(d).map(|p| p.potential()),
                None,
                Some(3.0),
            )
        }
        path => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read potential {path}: {e}"))?;
            (MeasurePotential::from_json(&text), None, None)
        }
    };
    let q = q.map_err(err)?;
    let r = dirichlet_eig1(q.interval, &q, a.n).map_err(err)?;
    let tol = 3.0 * r.error_estimate;
    let mut checks = Vec::new();
    if let Some(t) = expected {
        checks.push(check_json(
            "expected",
            r.extrapolated_value,
            t,
            tol.max(1e-3),
        ));
    }
    if let Some(f) = floor {
        checks.push(to_value(&Check::at_least(
            "class_a_floor",
            r.extrapolated_value,
            f,
            tol,
        )));
    }
    let mut rep = Report::new("solve-1d", to_value(a));
    rep.tolerance("policy", TOL_POLICY)
        .tolerance("expected_abs", 1e-3);
    rep.pass = checks.iter().all(|c| c["pass"] == json!(true));
    rep.result = json!({
        "interval": [q.interval.a, q.interval.b],
        "dom": [q.dom.a, q.dom.b],
        "lambda1": r.value,
        "extrapolated": r.extrapolated_value,
        "error": r.error_estimate,
        "tol": tol,
        "grid_size": r.grid_size,
        "warning": r.warning,
        "checks": checks,
    });
    let mut t = Table::new(&["potential", "lambda1", "extrapolated", "error"]);
    t.push(vec![
        a.potential.clone(),
        num(r.value),
        num(r.extrapolated_value),
        num(r.error_estimate),
    ]);
    if out_is_stdout(&a.output) {
        eprintln!(
            "lambda1 = {:.10} (error {:.1e})",
            r.extrapolated_value, r.error_estimate
        );
    }
    finish(&rep, &a.output, Some(t), Vec::new())
}

fn out_is_stdout(o: &Output) -> bool {
    o.out.is_none()
}

pub fn solve_2d(a: &Solve2dArgs) -> CmdResult {
    let (name, p) = domain::resolve(&a.domain, a.seed)?;
    let delta = resolve_delta(&p, a.delta)?;
    let pairs = match (a.kind.as_str(), a.k) {
        ("dirichlet", k) => {
            let k = k.unwrap_or(2);
            if !(1..=3).contains(&k) {
                return Err(format!("--k must be 1, 2 or 3, got {k}"));
            }
            dirichlet_eigs(&p, k, delta).map_err(err)?
        }
        ("neumann", None | Some(1)) => vec![neumann_eig1(&p, delta).map_err(err)?],
        ("neumann", Some(k)) => {
            return Err(format!("neumann solves return one eigenvalue; got --k {k}"))
        }
        (k, _) => return Err(format!("unknown kind `{k}`; expected dirichlet or neumann")),
    };
    let g = &pairs[0].function.grid;
    let mut rep = Report::new("solve-2d", config_with_delta(a, &name, delta));
    rep.tolerance("policy", TOL_POLICY);
    let eig: Vec<Value> = pairs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "index": i + 1,
                "value": e.value,
                "coarse": e.coarse_value,
                "extrapolated": e.extrapolated,
                "error": e.error_estimate,
                "tol": e.tol(),
                "residual": e.residual,
            })
        })
        .collect();
    rep.result = json!({
        "kind": a.kind,
        "grid": { "nx": g.nx, "ny": g.ny, "cells": g.len(), "hx": g.hx, "hy": g.hy },
        "eigenvalues": eig,
    });
    let mut t = Table::new(&["index", "value", "coarse", "extrapolated", "error"]);
    for (i, e) in pairs.iter().enumerate() {
        t.push(vec![
            (i + 1).to_string(),
            num(e.value),
            num(e.coarse_value),
            num(e.extrapolated),
            num(e.error_estimate),
        ]);
    }
    let last = &pairs.last().unwrap().function;
    if let Some(path) = &a.pgm {
        write_file(path, &plot::pgm(last))?;
    }
    let svg = plot::svg(
        &p,
        &Overlay {
            heat: Some(last),
            ..Default::default()
        },
    );
    finish(
        &rep,
        &a.output,
        Some(t),
        vec![("eigenfunction.svg".into(), svg)],
    )
}

pub fn rearrange(a: &RearrangeArgs) -> CmdResult {
    let v = match &a.function {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let g: GridFunction =
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            TestFunction::new(g).map_err(err)?
        }
        None => {
            let seed = a
                .seed
                .ok_or("random test functions need a seed (--seed or GAPLAB_SEED)")?;
            if a.bumps == 0 {
                return Err("--bumps must be at least 1".into());
            }
            sampling::test_function(&mut sampling::rng(seed), Interval::i_pi(), a.bumps, a.n)
                .map_err(err)?
        }
    };
    let d = stratified(&v).map_err(err)?;
    let eta = eta1_stratified(&d.potential_sampler(), &d.constraints(), a.eta_n).map_err(err)?;
    let check = Check::at_least("eta1_floor", eta.extrapolated, 4.0, eta.tol());
    let mut rep = Report::new("rearrange", to_value(a));
    rep.tolerance("policy", TOL_POLICY);
    rep.pass = check.pass;
    let potential = d.potential_samples(a.n.max(16));
    rep.result = json!({
        "tree": d.nodes,
        "gamma": d.gamma(),
        "constraints": d.constraints(),
        "function": v.function(),
        "rearranged": d.rearranged,
        "potential": potential,
        "eta1": {
            "value": eta.value,
            "extrapolated": eta.extrapolated,
            "error": eta.error_estimate,
            "iterations": eta.iterations,
        },
        "checks": [check],
    });
    let f = v.function();
    let mut t = Table::new(&["x", "v", "rearranged", "potential"]);
    for (x, r) in d.rearranged.xs.iter().zip(&d.rearranged.values) {
        t.push(vec![
            num(*x),
            num(f.interp(*x)),
            num(*r),
            num(d.potential(*x)),
        ]);
    }
    finish(&rep, &a.output, Some(t), Vec::new())
}

pub fn partition(a: &PartitionArgs) -> CmdResult {
    let (name, p) = domain::resolve(&a.domain, a.seed)?;
    let delta = resolve_delta(&p, a.delta)?;
    let kind: PartitionKind = a.kind.parse().map_err(err)?;
    let (field, heat, lambda2, weight): (
        WeightedField,
        GridFunction2D,
        Option<f64>,
        Box<dyn Fn(Vec2) -> f64 + Sync>,
    ) = match a.weight.as_str() {
        "u1sq" => {
            let e = dirichlet_eigs(&p, 2, delta).map_err(err)?;
            let (u1, u2) = (&e[0].function, &e[1].function);
            let phi: Vec<f64> = u1.values.iter().map(|v| v * v).collect();
            let q: Vec<f64> = u1
                .values
                .iter()
                .zip(&u2.values)
                .map(|(x, y)| y / x)
                .collect();
            let f = WeightedField::new(&GridFunction2D::new(u1.grid.clone(), q, false), phi)
                .map_err(err)?;
            let w = u1.clone();
            (
                f,
                u1.clone(),
                Some(e[1].extrapolated),
                Box::new(move |x| w.interp(x).powi(2)),
            )
        }
        "one" => {
            let m = neumann_eig1(&p, delta).map_err(err)?;
            let f =
                WeightedField::new(&m.function, vec![1.0; m.function.grid.len()]).map_err(err)?;
            (f, m.function, None, Box::new(|_| 1.0))
        }
        w => return Err(format!("unknown weight `{w}`; expected u1sq or one")),
    };
    let field = field.with_zero_mean(&p).map_err(err)?;
    let part = equipartition(&p, &field, a.n, kind).map_err(err)?;
    let (mean_defect, mass_defect) = part.worst_defect();
    let mut checks = vec![
        json!({ "name": "zero_mean", "value": mean_defect, "tol": EPS_PART, "pass": mean_defect <= EPS_PART }),
        json!({ "name": "equal_mass", "value": mass_defect, "tol": EPS_PART, "pass": mass_defect <= EPS_PART }),
        json!({ "name": "confident_cuts", "pass": !part.any_low_confidence() }),
    ];
    let mut extra = serde_json::Map::new();
    if kind == PartitionKind::L2 {
        let id = part.identity_residual();
        checks.push(json!({ "name": "rayleigh_identity", "value": id, "tol": EPS_PART, "pass": id <= EPS_PART }));
        if a.mean_value {
            let mv = mean_value_bound(&part, &*weight, a.cells_across).map_err(err)?;
            checks.push(json!({ "name": "mean_value_bound", "pass": mv.inequality_holds }));
            extra.insert("mean_value".into(), to_value(&mv));
        }
        if let Some(l2) = lambda2 {
            let s = section_lower_bound_check(&part, &p, l2).map_err(err)?;
            if !s.skipped {
                checks.push(json!({ "name": "section_bound", "pass": s.pass }));
            }
            extra.insert("sections".into(), to_value(&s));
        }
    }
    let diags: Vec<Value> = part
        .cells
        .iter()
        .map(|c| match cell_diagnostics(&c.polygon, &*weight) {
            Ok(d) => to_value(&d),
            Err(e) => json!({ "error": e.to_string() }),
        })
        .collect();
    let mut rep = Report::new("partition", config_with_delta(a, &name, delta));
    rep.tolerance("eps_part", EPS_PART)
        .tolerance("policy", TOL_POLICY);
    rep.pass = checks.iter().all(|c| c["pass"] == json!(true));
    rep.result = json!({
        "partition": part,
        "diagnostics": diags,
        "worst_mean_defect": mean_defect,
        "worst_mass_defect": mass_defect,
        "checks": checks,
    });
    for (k, v) in extra {
        rep.result[k] = v;
    }
    let mut t = Table::new(&[
        "cell",
        "area",
        "diameter",
        "width",
        "h_min",
        "h_max",
        "affinity_residual",
        "mu1",
        "mu1_error",
        "int_up",
        "int_u2p",
        "low_confidence",
    ]);
    for (i, (c, d)) in part.cells.iter().zip(&diags).enumerate() {
        let g = |k: &str| d.get(k).and_then(Value::as_f64);
        t.push(vec![
            i.to_string(),
            num(c.polygon.area()),
            num(g("diameter")),
            num(c.polygon.width()),
            num(g("h_min")),
            num(g("h_max")),
            num(g("affinity_residual")),
            num(g("mu1")),
            num(g("mu1_error")),
            num(c.integrals.up),
            num(c.integrals.u2p),
            c.low_confidence.to_string(),
        ]);
    }
    let svg = plot::svg(
        &p,
        &Overlay {
            heat: Some(&heat),
            cells: part.cells.iter().map(|c| &c.polygon).collect(),
            ..Default::default()
        },
    );
    finish(
        &rep,
        &a.output,
        Some(t),
        vec![("partition.svg".into(), svg)],
    )
}

fn check_table(
    r: &lab::GapReport,
    value: Option<(f64, f64)>,
    floor: f64,
    excess: Option<f64>,
) -> Table {
    let mut t = Table::new(&[
        "domain", "delta", "diameter", "width", "value", "error", "floor", "excess", "pass",
    ]);
    t.push(vec![
        r.domain.clone(),
        num(r.delta),
        num(r.diameter),
        num(r.width),
        num(value.map(|v| v.0)),
        num(value.map(|v| v.1)),
        num(floor),
        num(excess),
        r.pass.to_string(),
    ]);
    t
}

fn diameter_svg(p: &ConvexPolygon) -> String {
    plot::svg(
        p,
        &Overlay {
            chords: vec![p.diameter()],
            ..Default::default()
        },
    )
}

pub fn gap_check(a: &CheckArgs) -> CmdResult {
    let (name, p) = domain::resolve(&a.domain, a.seed)?;
    let delta = resolve_delta(&p, a.delta)?;
    let r = lab::verify_gap(&p, &name, delta).map_err(err)?;
    let mut rep = Report::new("gap-check", config_with_delta(a, &name, delta));
    rep.tolerance("policy", TOL_POLICY)
        .tolerance("nondegenerate_ratio", lab::NONDEGENERATE_RATIO);
    rep.pass = r.pass;
    rep.result = to_value(&r);
    let t = check_table(
        &r,
        r.gap.map(|g| (g.extrapolated, g.error_estimate)),
        r.gap_floor,
        r.gap_excess,
    );
    finish(
        &rep,
        &a.output,
        Some(t),
        vec![("domain.svg".into(), diameter_svg(&p))],
    )
}

pub fn neumann_check(a: &CheckArgs) -> CmdResult {
    let (name, p) = domain::resolve(&a.domain, a.seed)?;
    let delta = resolve_delta(&p, a.delta)?;
    let r = lab::verify_neumann(&p, &name, delta).map_err(err)?;
    let mut rep = Report::new("neumann-check", config_with_delta(a, &name, delta));
    rep.tolerance("policy", TOL_POLICY);
    rep.pass = r.pass;
    rep.result = to_value(&r);
    let t = check_table(
        &r,
        r.mu1.map(|g| (g.extrapolated, g.error_estimate)),
        r.neumann_floor,
        r.neumann_excess,
    );
    finish(
        &rep,
        &a.output,
        Some(t),
        vec![("domain.svg".into(), diameter_svg(&p))],
    )
}

fn parse_chord(s: &str) -> Result<Chord, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("bad chord `{s}`; expected x0,y0,x1,y1"))?;
    match v.as_slice() {
        [x0, y0, x1, y1] => Ok(Chord::new(Vec2::new(*x0, *y0), Vec2::new(*x1, *y1))),
        _ => Err(format!("bad chord `{s}`; expected x0,y0,x1,y1")),
    }
}

pub fn localized(a: &LocalizedArgs) -> CmdResult {
    let (name, p) = domain::resolve(&a.domain, a.seed)?;
    let delta = resolve_delta(&p, a.delta)?;
    let chords = match &a.chord {
        Some(s) => vec![parse_chord(s)?],
        None => {
            let seed = a
                .seed
                .ok_or("random chords need a seed (--seed or GAPLAB_SEED)")?;
            random_chords(&p, a.chords, seed)
        }
    };
    let e = dirichlet_eigs(&p, 1, delta).map_err(err)?;
    let rel = e[0].error_estimate / e[0].extrapolated;
    let reports = chords
        .iter()
        .map(|c| {
            let h = Weight1D::constant(Interval::new(0.0, c.length)?, 1.0);
            verify_localized_on(&p, &e[0].function, rel, c, &h, a.m)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let mut rep = Report::new("localized", config_with_delta(a, &name, delta));
    rep.tolerance(
        "policy",
        "3 x chord error estimate + 3 x relative eigenvalue error x floor",
    );
    rep.pass = reports.iter().all(|r| r.pass);
    let floor = 3.0 * PI * PI / p.diameter().length.powi(2);
    rep.result = json!({
        "lambda1": e[0].extrapolated,
        "lambda1_error": e[0].error_estimate,
        "floor": floor,
        "violations": reports.iter().filter(|r| !r.pass).count(),
        "chords": reports,
    });
    let mut t = Table::new(&[
        "x0", "y0", "x1", "y1", "length", "mu1", "floor", "excess", "tol", "pass",
    ]);
    for r in &reports {
        t.push(vec![
            num(r.chord[0][0]),
            num(r.chord[0][1]),
            num(r.chord[1][0]),
            num(r.chord[1][1]),
            num(r.length),
            num(r.mu1_extrapolated),
            num(r.floor),
            num(r.excess),
            num(r.tol),
            r.pass.to_string(),
        ]);
    }
    let svg = plot::svg(
        &p,
        &Overlay {
            heat: Some(&e[0].function),
            chords,
            ..Default::default()
        },
    );
    finish(&rep, &a.output, Some(t), vec![("chords.svg".into(), svg)])
}

fn resolve_family(s: &str, seed: Option<u64>) -> Result<Family, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let full = match parts.as_slice() {
        ["random"] | ["random", _] => {
            let seed = seed.ok_or("the random family needs a seed (--seed or GAPLAB_SEED)")?;
            format!("random:{}:{seed}", parts.get(1).unwrap_or(&"6"))
        }
        _ => s.to_string(),
    };
    full.parse().map_err(err)
}

pub fn sweep(a: &SweepArgs) -> CmdResult {
    let family = resolve_family(&a.family, a.seed)?;
    let mode: Mode = a.mode.parse().map_err(err)?;
    if a.jobs == 0 {
        return Err("--jobs must be at least 1".into());
    }
    if a.params.iter().any(|t| !(*t > 0.0)) {
        return Err("sweep parameters must be positive".into());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(err)?;
    let entries = pool
        .install(|| {
            a.params
                .par_iter()
                .map(|&t| sweep_member(family, t, mode, a.cells_across))
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(err)?;
    let mut sorted = entries.clone();
    sorted.sort_by(|x, y| x.param.total_cmp(&y.param));
    let mut cfg = to_value(a);
    cfg["family"] = json!(family.to_string());
    let mut rep = Report::new("sweep", cfg);
    rep.tolerance("policy", TOL_POLICY)
        .tolerance("rect_slope", lab::RECT_SLOPE)
        .tolerance("rect_slope_tol", lab::RECT_SLOPE_TOL);
    match fit_sweep(family, mode, entries) {
        Ok(fit) => {
            rep.pass = fit.pass;
            rep.result = to_value(&fit);
        }
        Err(e) => {
            rep.pass = family != Family::Rects;
            rep.result = json!({ "family": family.to_string(), "mode": mode, "entries": sorted, "fit_error": e.to_string() });
        }
    }
    let mut t = Table::new(&[
        "param",
        "width",
        "diameter",
        "delta",
        "coarse",
        "fine",
        "extrapolated",
        "error",
        "floor",
        "excess",
    ]);
    for e in &sorted {
        t.push(vec![
            num(e.param),
            num(e.width),
            num(e.diameter),
            num(e.delta),
            num(e.value.coarse),
            num(e.value.fine),
            num(e.value.extrapolated),
            num(e.value.error_estimate),
            num(e.floor),
            num(e.excess),
        ]);
    }
    let svgs = sorted
        .iter()
        .enumerate()
        .filter_map(|(i, e)| family.member(e.param).ok().map(|p| (i, p)))
        .map(|(i, p)| (format!("member_{i:02}.svg"), diameter_svg(&p)))
        .collect();
    finish(&rep, &a.output, Some(t), svgs)
}
