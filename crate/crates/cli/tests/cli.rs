use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_croftonlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fixture(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn circle1() -> String {
    let r = 1f64.tanh();
    fixture("circle1.json", &format!(r#"{{"kind":"circle","center":[0,0],"chart_radius":{r}}}"#))
}

#[test]
fn hyperbolic_circle_of_radius_one() {
    let o = run(&["perimeter", "--space", "hyperbolic", "--method", "cauchy-omega", "--body", &circle1()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "cauchy-omega");
    let v: f64 = row[1].parse().unwrap();
    assert!((v - std::f64::consts::TAU * 1f64.sinh()).abs() < 1e-9, "{v}");
}

#[test]
fn all_methods_agree() {
    let o = run(&["perimeter", "--space", "hyperbolic", "--body", &circle1()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "method,value,error_estimate,evaluations,converged");
    let vals: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(vals.len(), 6);
    let want = std::f64::consts::TAU * 1f64.sinh();
    assert!(vals.iter().all(|v| ((v - want) / want).abs() < 1e-9), "{vals:?}");
}

#[test]
fn json_output_parses() {
    let o = run(&["perimeter", "--space", "sphere", "--body", &circle1(), "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn empty_body_is_bad_input() {
    let empty = fixture("empty.json", "");
    let o = run(&["perimeter", "--space", "hyperbolic", "--body", &empty]);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["error"], "BAD_INPUT");
}

#[test]
fn invalid_bodies_exit_two() {
    let nonconvex = fixture("dart.json", r#"{"kind":"polygon","vertices":[[0,0],[0.5,0.2],[0,0.5],[0.1,0.2]]}"#);
    let cw = fixture("cw.json", r#"{"kind":"polygon","vertices":[[0.3,0],[-0.2,-0.2],[0,0.4]]}"#);
    let big = fixture("big.json", r#"{"kind":"circle","center":[0,0],"chart_radius":1.2}"#);
    for (body, want) in [(&nonconvex, "NON_CONVEX"), (&cw, "NOT_CCW"), (&big, "OUTSIDE_CHART")] {
        let o = run(&["perimeter", "--space", "hyperbolic", "--body", body]);
        assert_eq!(code(&o), 2, "{body}");
        let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(v["error"], want);
    }
    let o = run(&["perimeter", "--space", "hyperbolic", "--k", "1", "--body", &circle1()]);
    assert_eq!(code(&o), 2);
    let o = run(&["perimeter", "--space", "sphere", "--method", "projective-w", "--body", &circle1()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn nonconvergence_exits_three() {
    let tri = fixture("tri.json", r#"{"kind":"polygon","vertices":[[0.3,0],[0,0.4],[-0.2,-0.2]]}"#);
    let o = run(&["perimeter", "--space", "hyperbolic", "--method", "minkowski", "--tol", "1e-300", "--body", &tri]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NONCONVERGED"));
    assert!(stdout(&o).contains("false"));
}

#[test]
fn hilbert_perimeter_methods() {
    let tri = fixture("tri_body.json", r#"{"kind":"polygon","vertices":[[0.3,0],[0,0.4],[-0.2,-0.2]]}"#);
    let sq = fixture(
        "square.json",
        r#"{"kind":"polygon","vertices":[[-1,-1],[1,-1],[1,1],[-1,1]],"role":"hilbert_domain"}"#,
    );
    let o = run(&["perimeter", "--space", "hilbert", "--body", &tri, "--domain", &sq]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let vals: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(vals.len(), 2);
    assert!(((vals[0] - vals[1]) / vals[1]).abs() < 1e-9, "{vals:?}");
}

#[test]
fn distances() {
    let o = run(&["distance", "--space", "hilbert", "--p", "0,0", "--q", "0.5,0"]);
    assert_eq!(code(&o), 0);
    let v: f64 = stdout(&o).lines().nth(1).unwrap().parse().unwrap();
    assert!((v - 0.5 * 3f64.ln()).abs() < 1e-15);
    let o = run(&["distance", "--space", "hyperbolic", "--p", "0.1,-0.2", "--q", "0.1,-0.2", "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["distance"], 0.0);
    let o = run(&["distance", "--space", "hilbert", "--p", "0,0", "--q", "1.5,0"]);
    assert_eq!(code(&o), 2);
    let o = run(&["distance", "--space", "hilbert", "--p", "0;0", "--q", "1,0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn crofton_estimate_replays() {
    let args = [
        "distance",
        "--space",
        "hilbert",
        "--method",
        "crofton",
        "--p",
        "-0.3,0.1",
        "--q",
        "0.4,0.2",
        "--samples",
        "20000",
        "--seed",
        "5",
        "--out",
        "json",
    ];
    let a = run(&args);
    let b = bin().args(args).env("CROFTONLAB_THREADS", "1").output().unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    assert_eq!(v["n"], 20000);
    assert_eq!(v["seed"], 5);
    assert!(v["std_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn measures_table() {
    let el = fixture("ellipse.json", r#"{"kind":"ellipse","center":[0.05,-0.02],"a":0.5,"b":0.3}"#);
    let o = run(&["measures", "--space", "hyperbolic", "--body", &el, "--samples", "37"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 37);
    let col = |n: &str| header.iter().position(|h| *h == n).unwrap();
    for r in &rows {
        assert_eq!(r.len(), header.len());
        let chain = r[col("dphi_dtheta")] - r[col("dphi_domega")] * r[col("domega_dtheta")];
        assert!(chain.abs() < 1e-12, "{chain}");
    }

    let o = run(&["measures", "--space", "sphere", "--body", &circle1(), "--samples", "8"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let header: Vec<&str> = out.lines().next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == "domega_dtheta").unwrap();
    for l in out.lines().skip(1) {
        let v: f64 = l.split(',').nth(i).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    let tri = fixture("tri_m.json", r#"{"kind":"polygon","vertices":[[0.3,0],[0,0.4],[-0.2,-0.2]]}"#);
    assert_eq!(code(&run(&["measures", "--space", "hyperbolic", "--body", &tri])), 2);
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--suite", "core", "--seed", "7"]);
    let b = run(&["verify", "--suite", "core", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.starts_with("suite,name,max_deviation,threshold,status\n"));
    assert!(out.lines().skip(1).all(|l| l.ends_with(",PASS")));
}

#[test]
fn corrupted_tolerance_fails_verification() {
    let o = run(&["verify", "--suite", "core", "--threshold-scale", "1e-30"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains(",FAIL"));
}

#[test]
fn unknown_suite_is_input_error() {
    assert_eq!(code(&run(&["verify", "--suite", "nope"])), 2);
}
