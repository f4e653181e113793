use std::process::{Command, Output};

use serde_json::Value;

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .env_remove("QWALK_CONFIG")
        .output()
        .expect("spawn qwalk")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let o = qwalk(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn error_of(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stderr).expect("stderr carries a JSON error");
    v["error"].clone()
}

#[test]
fn watson_csv_marks_low_dimensions_infinite() {
    let o = qwalk(&["--format", "csv", "watson", "--d", "1..3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,c,c1,asym3,status");
    assert!(lines[1].starts_with("1,INF,-INF,"), "{}", lines[1]);
    assert!(lines[2].starts_with("2,INF,-INF,"), "{}", lines[2]);
    let c3: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
    assert!((c3 - 0.5054620).abs() < 1e-6);
}

#[test]
fn watson_json_uses_string_infinities() {
    let v = ok_json(&["watson", "--d", "2,10"]);
    assert_eq!(v[0]["c"], "inf");
    assert_eq!(v[0]["status"], "divergent");
    let c10 = v[1]["c"].as_f64().unwrap();
    assert!((c10 - v[1]["asym3"].as_f64().unwrap()).abs() < 5e-4);
}

#[test]
fn one_particle_spectrum_in_one_dimension() {
    let v = ok_json(&["spectrum", "--d", "1", "--lambda", "1", "--mu", "2"]);
    assert_eq!(v["essential"][0], 0.0);
    assert_eq!(v["essential"][1], 4.0);
    assert_eq!(v["point"]["kind"], "Exists");
    let nu = v["point"]["nu"].as_f64().unwrap();
    assert!((nu - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-10);
    assert_eq!(v["regime"], "low-dimension");
    assert_eq!(v["edge_constant"], "inf");
}

#[test]
fn fully_inert_fiber_has_a_flat_band() {
    let v = ok_json(&["spectrum", "--d", "2", "--lambda1", "1", "--lambda2", "1", "--mu", "2", "--phi", "1,1"]);
    assert_eq!(v["essential"][0], 8.0);
    assert_eq!(v["essential"][1], 8.0);
    assert_eq!(v["point"]["nu"], 10.0);
}

#[test]
fn no_interaction_means_no_eigenvalue() {
    let v = ok_json(&["spectrum", "--d", "3", "--lambda", "1", "--mu", "0"]);
    assert_eq!(v["point"]["kind"], "Absent");
    assert_eq!(v["regime"], "no-interaction");
    assert!(v["point"].get("nu").is_none());
}

#[test]
fn weak_coupling_in_three_dimensions_is_absent() {
    let v = ok_json(&["spectrum", "--d", "3", "--lambda", "1", "--mu", "1"]);
    assert_eq!(v["point"]["kind"], "Absent");
    assert_eq!(v["regime"], "strict-threshold");
}

#[test]
fn surface_rows_cover_the_grid() {
    let o = qwalk(&["surface", "--d", "2", "--lambda1", "1", "--lambda2", "1", "--mu", "2", "--grid", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(rows.next().unwrap(), "phi1,phi2,verdict,nu,regime");
    let rows: Vec<Vec<String>> = rows.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 64);
    let find = |a: &str, b: &str| rows.iter().find(|r| r[0] == a && r[1] == b).unwrap().clone();
    let origin = find("0", "0");
    let nu0: f64 = origin[3].parse().unwrap();
    // phi = 0: band [0, 16], weakly bound just above it
    assert!(nu0 > 16.0 && nu0 < 16.01, "{nu0}");
    let corner = find("1", "1");
    assert_eq!(corner[2], "Exists");
    assert_eq!(corner[3], "10");
}

#[test]
fn surface_with_empty_grid_writes_nothing() {
    let o = qwalk(&["surface", "--d", "1", "--lambda1", "1", "--lambda2", "2", "--mu", "1", "--grid", "0"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn inert_fiber_eigenvector_is_a_delta() {
    let o = qwalk(&["wavefunction", "--d", "1", "--lambda1", "1", "--lambda2", "1", "--mu", "3", "--phi", "1", "--radius", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "x1,re,im");
    assert_eq!(&data[1..], ["-2,0,0", "-1,0,0", "0,1,0", "1,0,0", "2,0,0"]);
    assert!(text.contains("# nu = 7"));
}

#[test]
fn one_particle_wavefunction_decays_at_the_closed_form_rate() {
    let v = ok_json(&["--format", "json", "wavefunction", "--d", "1", "--lambda", "1", "--mu", "2", "--radius", "12"]);
    let t = v["decay_fit"]["t"].as_f64().unwrap();
    assert!((t - (2f64.sqrt() - 1.0)).abs() < 1e-8, "{t}");
    assert!((v["k0_check"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn generator_corner_value() {
    let v = ok_json(&["--format", "json", "g0", "--d", "1", "--lambda1", "1", "--lambda2", "2", "--mu", "4", "--radius", "2"]);
    let rows = v["values"].as_array().unwrap();
    let corner = rows.iter().find(|r| r["x1"] == serde_json::json!([0]) && r["x"] == serde_json::json!([0])).unwrap();
    let g = corner["value"].as_f64().unwrap();
    assert!((g - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-9, "{g}");
}

#[test]
fn zero_radius_is_a_usage_error() {
    let o = qwalk(&["wavefunction", "--d", "1", "--lambda", "1", "--mu", "2", "--radius", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_of(&o)["field"], "radius");
}

#[test]
fn zero_dimension_is_rejected() {
    let o = qwalk(&["spectrum", "--d", "0", "--lambda", "1", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(error_of(&o)["message"].as_str().unwrap().contains('d'));
}

#[test]
fn unknown_subcommand_exits_with_usage() {
    let o = qwalk(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_of(&o)["kind"], "usage");
}

#[test]
fn config_file_fills_in_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walk.toml");
    std::fs::write(&path, "d = 1\nlambda = 1.0\nmu = 2.0\nformat = \"csv\"\n").unwrap();
    let cfg = path.to_str().unwrap();

    let o = qwalk(&["--config", cfg, "spectrum"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("beta1,beta2,kind,nu,"));

    // explicit flags win over the file
    let o = qwalk(&["--config", cfg, "--format", "json", "spectrum", "--mu", "-2"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["point"]["nu"].as_f64().unwrap() < 0.0);

    // the environment variable names the same file
    let o = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(["spectrum"])
        .env("QWALK_CONFIG", cfg)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("beta1,"));
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "dimension = 3\n").unwrap();
    let o = qwalk(&["--config", path.to_str().unwrap(), "watson", "--d", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_of(&o)["field"], "config");
}

#[test]
fn out_flag_writes_the_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let o = qwalk(&["--format", "csv", "--out", path.to_str().unwrap(), "watson", "--d", "3"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("d,c,c1,asym3,status\n3,0.50546"));
}

#[test]
fn json_output_round_trips() {
    let o = qwalk(&["spectrum", "--d", "2", "--lambda1", "0.5", "--lambda2", "1.5", "--mu", "-3", "--phi", "0.25,-0.5"]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let args = ["surface", "--d", "2", "--lambda1", "0.7", "--lambda2", "1.3", "--mu", "-2.5", "--grid", "6,4"];
    let one = qwalk(&[&["--threads", "1"][..], &args[..]].concat());
    let four = qwalk(&[&["--threads", "4"][..], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}
