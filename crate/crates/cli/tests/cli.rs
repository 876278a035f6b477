use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gaplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaplab"))
        .args(args)
        .env_remove("GAPLAB_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gaplab-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Significant digits in the mantissa of a JSON number literal.
fn digits(lit: &str) -> usize {
    let mantissa = lit.split(['e', 'E']).next().unwrap();
    let d: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    d.trim_start_matches('0').trim_end_matches('0').len()
}

fn numbers(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Number(n) => out.push(n.to_string()),
        Value::Array(a) => a.iter().for_each(|x| numbers(x, out)),
        Value::Object(o) => o.values().for_each(|x| numbers(x, out)),
        _ => {}
    }
}

#[test]
fn tan_benchmark_is_three() {
    let out = gaplab(&["solve-1d", "--potential", "tan3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let lam = r["result"]["extrapolated"].as_f64().unwrap();
    assert!((lam - 3.0).abs() < 1e-3, "{lam}");
    assert_eq!(r["command"], "solve-1d");
    assert!(r["version"].is_string() && r["tolerances"].is_object());
}

#[test]
fn gap_check_on_the_square_passes() {
    let out = gaplab(&["gap-check", "--domain", "square", "--delta", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["config"]["delta"], 0.01);
    let gap = r["result"]["gap"]["extrapolated"].as_f64().unwrap();
    assert!((gap / (3.0 * std::f64::consts::PI.powi(2)) - 1.0).abs() < 1e-3);
}

#[test]
fn malformed_domain_is_a_usage_error() {
    let out = gaplab(&["gap-check", "--domain", "bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
    assert_eq!(gaplab(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        gaplab(&["solve-2d", "--domain", "square", "--kind", "neumann", "--k", "2"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn random_generators_need_a_seed() {
    assert_eq!(gaplab(&["rearrange"]).status.code(), Some(1));
    assert_eq!(
        gaplab(&["localized", "--domain", "square"]).status.code(),
        Some(1)
    );
    assert_eq!(
        gaplab(&["gap-check", "--domain", "random:5"]).status.code(),
        Some(1)
    );
}

#[test]
fn reports_are_deterministic_and_seed_falls_back_to_env() {
    let a = gaplab(&["rearrange", "--seed", "11", "--bumps", "4"]);
    let b = gaplab(&["rearrange", "--seed", "11", "--bumps", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_gaplab"))
        .args(["rearrange", "--bumps", "4"])
        .env("GAPLAB_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn numbers_carry_at_most_twelve_digits() {
    let out = gaplab(&["neumann-check", "--domain", "ngon:7"]);
    let mut lits = Vec::new();
    numbers(&json(&out), &mut lits);
    assert!(lits.len() > 10);
    for l in lits {
        assert!(digits(&l) <= 12, "{l}");
    }
}

#[test]
fn failed_check_exits_two_and_still_writes_the_report() {
    let dir = scratch("fail");
    let path = dir.join("sweep.json");
    // Three rectangles cannot support the four-point slope fit.
    let out = gaplab(&[
        "sweep",
        "--params",
        "0.4,0.2,0.1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["pass"], false);
    assert_eq!(r["result"]["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn sweep_is_independent_of_job_count() {
    let args = [
        "sweep",
        "--family",
        "ngons:5",
        "--params",
        "0.8,0.6,0.4,0.3",
        "--mode",
        "neumann",
    ];
    let one = json(&gaplab(&[&args[..], &["--jobs", "1"]].concat()));
    let two = json(&gaplab(&[&args[..], &["--jobs", "2"]].concat()));
    assert_eq!(one["result"], two["result"]);
    let params: Vec<f64> = one["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["param"].as_f64().unwrap())
        .collect();
    assert!(params.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn solve_2d_writes_plots_and_csv() {
    let dir = scratch("plots");
    let d = dir.to_str().unwrap();
    let pgm = dir.join("u.pgm");
    let csv = dir.join("eig.csv");
    let out = gaplab(&[
        "solve-2d",
        "--domain",
        "triangle",
        "--k",
        "3",
        "--pgm",
        pgm.to_str().unwrap(),
        "--svg",
        d,
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let eig = r["result"]["eigenvalues"].as_array().unwrap();
    assert_eq!(eig.len(), 3);
    // Equilateral triangle of side 1: λ₁ = 16π²/3.
    let l1 = eig[0]["extrapolated"].as_f64().unwrap();
    assert!(
        (l1 / (16.0 * std::f64::consts::PI.powi(2) / 3.0) - 1.0).abs() < 5e-3,
        "{l1}"
    );
    assert!(fs::read_to_string(&pgm).unwrap().starts_with("P2\n"));
    assert!(fs::read_to_string(dir.join("eigenfunction.svg"))
        .unwrap()
        .starts_with("<svg"));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 4);
}

#[test]
fn polygon_and_potential_files() {
    let dir = scratch("files");
    let poly = dir.join("square.json");
    fs::write(&poly, r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
    let from_file = json(&gaplab(&[
        "neumann-check",
        "--domain",
        poly.to_str().unwrap(),
    ]));
    let builtin = json(&gaplab(&["neumann-check", "--domain", "square"]));
    assert_eq!(from_file["result"]["mu1"], builtin["result"]["mu1"]);

    let pot = dir.join("free.json");
    let pi = std::f64::consts::PI;
    fs::write(
        &pot,
        format!(r#"{{"grid": {{"a": 0, "b": {pi}, "n": 4}}, "density": [0,0,0,0]}}"#),
    )
    .unwrap();
    let out = gaplab(&[
        "solve-1d",
        "--potential",
        pot.to_str().unwrap(),
        "--n",
        "1024",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lam = json(&out)["result"]["extrapolated"].as_f64().unwrap();
    assert!((lam - 1.0).abs() < 1e-6, "{lam}");
}

#[test]
fn partition_report_has_cells_and_diagnostics() {
    let dir = scratch("partition");
    let csv = dir.join("cells.csv");
    let out = gaplab(&[
        "partition",
        "--domain",
        "disk",
        "--n",
        "4",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(
        r["result"]["partition"]["cells"].as_array().unwrap().len(),
        4
    );
    assert_eq!(r["result"]["diagnostics"].as_array().unwrap().len(), 4);
    assert!(r["result"]["worst_mass_defect"].as_f64().unwrap() <= 1e-6);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 5);
    assert!(dir.join("partition.svg").exists());
}

#[test]
fn localized_chords_clear_the_floor() {
    let out = gaplab(&[
        "localized",
        "--domain",
        "square",
        "--seed",
        "5",
        "--chords",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["chords"].as_array().unwrap().len(), 6);
    assert_eq!(r["result"]["violations"], 0);
    let diag = gaplab(&["localized", "--domain", "square", "--chord", "0,0,1,1"]);
    assert_eq!(diag.status.code(), Some(0));
    let off = gaplab(&["localized", "--domain", "square", "--chord", "0,0,2,2"]);
    assert_eq!(off.status.code(), Some(1));
}
