use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dilation(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilation"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_csv(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn regularity_examples() {
    let v = json(&dilation(&["regularity", "[2,3]"]));
    assert_eq!(v["m"], 2);
    assert!((v["contraction"].as_f64().unwrap() - 5.0 / 9.0).abs() < 1e-15);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 4);

    assert_eq!(json(&dilation(&["regularity", "[2]"]))["m"], 1);

    let bad = dilation(&["regularity", "[1,2]"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("UnitEntry"));
}

#[test]
fn regularity_from_file_keeps_key_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    fs::write(&path, "[1.5, 2, 2.5, 3]").unwrap();
    let out = dilation(&["regularity", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("{\"m\":4,\"contraction\":"), "{text}");
    let order: Vec<usize> = ["\"m\"", "\"contraction\"", "\"lower_bound\"", "\"upper_bound\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn normalize_rescales() {
    let v = json(&dilation(&["normalize", "[0.5, 3]"]));
    assert_eq!(v, serde_json::json!([2.0, 6.0]));
    assert_eq!(dilation(&["normalize", "[2, 2]"]).status.code(), Some(2));
}

#[test]
fn tent_extension_csv() {
    let out = dilation(&["extend", "--tent", "--shifts", "1,2", "--range", "-3,6", "--samples", "900"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("w,value\n"));
    let rows = read_csv(&text);
    assert_eq!(rows.len(), 901);
    for target in [2.5, -0.5] {
        let (_, v) = rows.iter().find(|(w, _)| (w - target).abs() < 1e-12).unwrap();
        assert!((v + 0.5).abs() <= 1e-12);
    }
    // 17 significant digits in every cell
    let first = text.lines().nth(1).unwrap();
    assert!(first.split(',').all(|c| c.split('e').next().unwrap().trim_start_matches('-').len() == 18));
    assert!(stderr(&out).contains("interpolation residual"));
}

#[test]
fn failed_interpolation_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.csv");
    let out = dilation(&[
        "extend",
        "--shifts",
        "1,2",
        "--boundary",
        r#"{"breakpoints":[0,1,2],"values":[1.1,1,-2]}"#,
        "--range",
        "-3,6",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("InterpolationViolated"));
    assert!(!out_path.exists());
}

#[test]
fn zero_boundary_gives_zero_solution() {
    let dir = tempfile::tempdir().unwrap();
    let boundary = dir.path().join("g.json");
    fs::write(&boundary, r#"{"breakpoints": [0, 0.7, 1.3], "values": [0, 0, 0]}"#).unwrap();
    let out = dilation(&[
        "extend",
        "--shifts",
        "0.7,1.3",
        "--boundary",
        boundary.to_str().unwrap(),
        "--range=-4,5",
        "--samples",
        "200",
    ]);
    let rows = read_csv(&String::from_utf8(out.stdout.clone()).unwrap());
    assert_eq!(rows.len(), 201);
    assert!(rows.iter().all(|&(_, v)| v == 0.0));
}

#[test]
fn extension_dump_round_trips_through_residual() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("g.csv");
    let out = dilation(&[
        "extend", "--tent", "--shifts", "1,2", "--range", "-6,9", "--samples", "1500", "--out",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // breakpoints of the tiling sit on the sample grid, so interpolation is exact
    let v = json(&dilation(&["residual", dump.to_str().unwrap(), "--shifts", "1,2", "--tol", "1e-9"]));
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["within_tol"], true);
    assert!(v["points"].as_i64().unwrap() > 1000);

    let r1 = dilation(&["residual", dump.to_str().unwrap(), "--shifts", "1,2", "--random", "500", "--seed", "3"]);
    let r2 = dilation(&["residual", dump.to_str().unwrap(), "--shifts", "1,2", "--random", "500", "--seed", "3"]);
    assert_eq!(r1.stdout, r2.stdout);
    assert_eq!(json(&r1)["points"], 500);
}

#[test]
fn periodicity_examples() {
    let v = json(&dilation(&["periodicity", "--shifts", "1,2", "--alpha-max", "10"]));
    let certs = v.as_array().unwrap();
    assert_eq!(certs.len(), 3);
    for (c, m) in certs.iter().zip([1.0, 2.0, 4.0]) {
        let alpha = c["alpha"].as_f64().unwrap();
        assert!((alpha - 2.0 * m * std::f64::consts::PI / 3.0).abs() <= 1e-10);
        assert!((c["period"].as_f64().unwrap() * alpha - 2.0 * std::f64::consts::PI).abs() <= 1e-10);
        assert!(c["residual"].as_f64().unwrap() <= 1e-16);
    }

    let none = dilation(&["periodicity", "--shifts", "1,1", "--alpha-max", "20"]);
    assert_eq!(json(&none), serde_json::json!([]));
    assert!(stderr(&none).contains("smallest residual 1e0"));
}

#[test]
fn equispaced_matches_scan() {
    let closed = json(&dilation(&["equispaced", "--n", "3", "--d", "0.5", "--m-max", "7"]));
    let scan = json(&dilation(&["periodicity", "--shifts", "0.5,1,1.5", "--alpha-max", "22"]));
    let alphas = |v: &Value| -> Vec<f64> {
        v.as_array().unwrap().iter().map(|c| c["alpha"].as_f64().unwrap()).collect()
    };
    let (a, b) = (alphas(&closed), alphas(&scan));
    assert_eq!(a.len(), 6);
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-10));
}

#[test]
fn two_term_verdicts() {
    assert_eq!(
        json(&dilation(&["two-term", "1", "1"])),
        serde_json::json!({"exists": false, "witness": null})
    );
    let v = json(&dilation(&["two-term", "2", "7"]));
    assert_eq!(v["exists"], true);
    let (k, m) = (v["witness"][0].as_i64().unwrap(), v["witness"][1].as_i64().unwrap());
    assert_eq!((2 + 3 * k, 1 + 3 * m), (2, 7));
    assert_eq!(dilation(&["two-term", "2", "4"]).status.code(), Some(2));
    assert_eq!(dilation(&["two-term", "1", "0"]).status.code(), Some(2));
}

#[test]
fn fourier_matrix_vanishes_at_a_frequency() {
    let theta = format!("{}", 2.0 * std::f64::consts::PI / 3.0);
    let v = json(&dilation(&["fourier-matrix", "--shifts", "1,2", "--theta", &theta]));
    assert!(v["max_abs_entry"].as_f64().unwrap() <= 1e-12);
    let v = json(&dilation(&["fourier-matrix", "--shifts", "1,2", "--theta", "1", "--k", "2"]));
    assert!(v["determinant"].as_f64().unwrap() > 1e-3);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 2);
}

#[test]
fn zeros_and_abs_grid() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("abs.csv");
    let out = dilation(&["zeros", "--n", "2", "--abs-grid", grid.to_str().unwrap()]);
    let zeros = json(&out);
    let ims: Vec<f64> = zeros.as_array().unwrap().iter().map(|z| z["im"].as_f64().unwrap()).collect();
    assert_eq!(ims.len(), 3);
    for (j, im) in ims.iter().enumerate() {
        let want = std::f64::consts::PI * (2 * j + 1) as f64 / 2f64.ln();
        assert!((im - want).abs() <= 1e-10);
    }
    assert!(zeros.as_array().unwrap().iter().all(|z| z["N"] == 2));
    assert!(stderr(&out).contains("winding count 3"));

    let text = fs::read_to_string(&grid).unwrap();
    assert!(text.starts_with("re,im,abs\n"));
    assert_eq!(text.lines().count(), 1 + 101 * 601);
}

#[test]
fn zeros_validate_the_rectangle() {
    let out = dilation(&["zeros", "--n", "3", "--re", "2,-3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(dilation(&["zeros", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn mora_solution_samples() {
    let out = dilation(&["mora-solution", "--n", "3", "--index", "1", "--samples", "500"]);
    assert!(out.status.success());
    let rows = read_csv(&String::from_utf8(out.stdout.clone()).unwrap());
    assert_eq!(rows.len(), 501);
    let err = stderr(&out);
    let residual: f64 = err
        .lines()
        .find_map(|l| l.strip_prefix("max equation residual on samples "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual <= 1e-8);
    assert_eq!(dilation(&["mora-solution", "--n", "2", "--index", "99"]).status.code(), Some(2));
}

#[test]
fn popoviciu_determinants() {
    let tent = json(&dilation(&["popoviciu", "--tent", "--shifts", "1,2", "--x", "0.5", "--h", "0.3", "--order", "3"]));
    assert!(tent["determinant"].as_f64().unwrap().abs() > 1e-8);
    let cos = json(&dilation(&["popoviciu", "--cos", "0.8", "--x", "-1.7", "--h", "0.4"]));
    assert!(cos["determinant"].as_f64().unwrap().abs() <= 1e-10);
    assert_eq!(dilation(&["popoviciu", "--cos", "1", "--x", "0", "--h", "0"]).status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = dilation(&["zeros", "--n", "4", "--im", "0,12", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        fs::read(&path).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
    let a = dilation(&["extend", "--tent", "--shifts", "0.5,1.25,2", "--range=-5,5"]);
    let b = dilation(&["extend", "--tent", "--shifts", "0.5,1.25,2", "--range=-5,5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_tolerance_and_missing_files() {
    assert_eq!(dilation(&["regularity", "[2]", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(dilation(&["regularity", "/nonexistent/a.json"]).status.code(), Some(2));
    assert_eq!(dilation(&["regularity", "[2, \"x\"]"]).status.code(), Some(2));
    let out = dilation(&["residual", "/nonexistent.csv", "--shifts", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new("/nonexistent.csv").exists());
}
