use serde_json::Value;
use std::process::{Command, Output};

fn wedge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wedge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// CSV body as rows of named fields.
fn csv(text: &str) -> Vec<Vec<(String, f64)>> {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| {
            header
                .iter()
                .cloned()
                .zip(l.split(',').map(|v| v.parse().unwrap()))
                .collect()
        })
        .collect()
}

fn field(row: &[(String, f64)], name: &str) -> f64 {
    row.iter()
        .find(|(k, _)| k == name)
        .unwrap_or_else(|| panic!("no column {name}"))
        .1
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&wedge(&a))).unwrap()
}

#[test]
fn solve_header_and_quarter_pi_pressure() {
    let text = stdout(&wedge(&[
        "solve",
        "--theta",
        "45",
        "--eps",
        "1e-6",
        "--e0prime",
        "1",
    ]));
    assert_eq!(
        text.lines().next().unwrap(),
        "eps,gamma,M0,theta_deg,alpha_deg,sigma,u1,v1,rho1,p1,eps_rho1,rho1_times_sigma_minus_a,rh_residual_max"
    );
    let rows = csv(&text);
    assert_eq!(rows.len(), 1);
    assert!((field(&rows[0], "p1") - 0.5).abs() < 1e-4);
    // 17 significant digits
    let p1 = text.lines().nth(1).unwrap().split(',').nth(9).unwrap();
    assert_eq!(p1.split('e').next().unwrap().replace('.', "").len(), 17);
}

#[test]
fn solve_from_gamma_and_mach() {
    let rows = csv(&stdout(&wedge(&[
        "solve", "--theta", "10", "--gamma", "1.4", "--m0", "5",
    ])));
    assert!((field(&rows[0], "alpha_deg") - 19.4).abs() < 0.1);
    assert!((field(&rows[0], "M0") - 5.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let out = wedge(&["solve", "--theta", "45", "--eps", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "limit_state_requested");

    let out = wedge(&["solve", "--theta", "80", "--eps", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(wedge(&["solve", "--theta", "45"]).status.code(), Some(3));
    assert_eq!(
        wedge(&["sweep", "--theta", "45", "--ladder", "1e-3,1e-2,4"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(wedge(&["--version"]).status.code(), Some(0));
}

#[test]
fn radians_flag_matches_degrees() {
    let d = stdout(&wedge(&["solve", "--theta", "30", "--eps", "0.01"]));
    let r = stdout(&wedge(&[
        "solve",
        "--theta-rad",
        &30f64.to_radians().to_string(),
        "--eps",
        "0.01",
    ]));
    assert_eq!(d, r);
}

#[test]
fn single_point_sweep_equals_solve() {
    let solve = stdout(&wedge(&["solve", "--theta", "30", "--eps", "0.05"]));
    let sweep = stdout(&wedge(&[
        "sweep",
        "--theta",
        "30",
        "--ladder",
        "0.05,0.05,1",
    ]));
    assert_eq!(solve, sweep);
}

#[test]
fn eps_sweep_converges_to_eps_rho_limit() {
    let rows = csv(&stdout(&wedge(&[
        "sweep",
        "--theta",
        "30",
        "--ladder",
        "1e-1,1e-6,11",
    ])));
    assert_eq!(rows.len(), 11);
    let target = 2.0 * 0.25 / (2.0 + 0.25);
    let gaps: Vec<f64> = rows
        .iter()
        .map(|r| (field(r, "eps_rho1") - target).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[10] < 1e-5);
}

#[test]
fn e0prime_sweep_approaches_circle_density() {
    let rows = csv(&stdout(&wedge(&[
        "sweep",
        "--theta",
        "10",
        "--eps",
        "0.4",
        "--sweep",
        "e0prime",
        "--ladder",
        "1e-1,1e-7,7",
    ])));
    let last = rows.last().unwrap();
    assert!((field(last, "rho1") - 6.0).abs() / 6.0 < 1e-5);
}

#[test]
fn limit_record() {
    let v = json(&["limit", "--theta", "60"]);
    assert!((v["report"]["u_lim"].as_f64().unwrap() - 0.25).abs() < 1e-15);
    let v = json(&["limit", "--theta", "45", "--e0prime", "1"]);
    assert!((v["report"]["mass_weight_rate"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["report"]["sigma_slope"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    for key in ["config", "report", "version"] {
        assert!(v.get(key).is_some());
    }
}

// The limit slopes against a Richardson extrapolation of sweep output.
#[test]
fn limit_matches_extrapolated_sweep() {
    let lim = json(&["limit", "--theta", "30", "--e0prime", "0.5"]);
    let sweep = json(&[
        "sweep",
        "--theta",
        "30",
        "--e0prime",
        "0.5",
        "--ladder",
        "1e-4,1e-5,2",
    ]);
    let rows = sweep["rows"].as_array().unwrap();
    let get = |i: usize, k: &str| rows[i][k].as_f64().unwrap();
    let a = 30f64.to_radians().tan();
    let d = |i: usize| (get(i, "sigma") - a) / get(i, "eps");
    let extrapolated = (10.0 * d(1) - d(0)) / 9.0;
    let slope = lim["report"]["sigma_slope"].as_f64().unwrap();
    assert!((extrapolated - slope).abs() / slope < 1e-5);
    let u_lim = lim["report"]["u_lim"].as_f64().unwrap();
    assert!((get(1, "u1") - u_lim).abs() < 1e-5);
}

#[test]
fn verify_and_converge_reports() {
    let v = json(&["verify-weak", "--theta", "30", "--n", "12"]);
    assert!(v["report"]["max_abs"].as_f64().unwrap() < 1e-10);
    let out = wedge(&[
        "verify-weak",
        "--theta",
        "30",
        "--eps",
        "0.1",
        "--n",
        "12",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(4));

    let v = json(&["converge", "--theta", "30", "--eps-list", "1e-2,1e-3,1e-4"]);
    assert_eq!(v["report"]["components"].as_array().unwrap().len(), 9);
}

#[test]
fn svg_and_out_files() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("polar.svg");
    let csv_path = dir.path().join("polar.csv");
    let out = wedge(&[
        "polar",
        "--theta",
        "20",
        "--eps",
        "0.4",
        "--circle",
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.matches("<polyline").count() >= 2);
    let table = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(table.lines().next(), Some("u,v"));
}
