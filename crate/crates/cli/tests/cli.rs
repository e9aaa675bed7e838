use std::process::{Command, Output};

fn kysmooth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kysmooth")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn radial_dirac_constant_is_two_pi_to_the_fourth() {
    let out = kysmooth(&["constant", "--eq", "dirac-radial", "--d", "3", "--weight", "power:s=2", "--psi", "theorem-explicit", "--m", "1"]);
    let v = json(&out);
    assert_eq!(v["schema"], "kysmooth.constant/v1");
    let c = v["constant_2pi"].as_f64().unwrap();
    let exact = (2.0 * std::f64::consts::PI).powi(4);
    assert!((c / exact - 1.0).abs() < 1e-6, "{c}");
    // the supremum is approached as r -> 0+
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(v["attained"], false);
}

#[test]
fn divergent_one_dimensional_constant_exits_2() {
    let out = kysmooth(&["constant", "--eq", "schrodinger", "--d", "1", "--weight", "exp:a=1", "--psi", "one", "--phi", "r2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert!(v["sup_value"].is_null());
    assert_eq!(v["attained"], false);
}

#[test]
fn attained_constant_exits_0() {
    let out = kysmooth(&["constant", "--d", "3", "--weight", "gauss:a=1", "--grid", "1e-3:1e3:128", "--tol", "1e-7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["attained"], true);
    assert_eq!(v["grid"]["points"], 128);
    assert_eq!(v["grid"]["tol"], 1e-7);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(kysmooth(&["constant", "--d", "3"]).status.code(), Some(1));
    assert_eq!(kysmooth(&["constant", "--d", "3", "--weight", "nope:a=1"]).status.code(), Some(1));
    assert_eq!(kysmooth(&["constant", "--d", "3", "--weight", "gauss:a=1", "--grid", "1:2"]).status.code(), Some(1));
    assert_eq!(kysmooth(&["constant", "--d", "3", "--weight", "gauss:a=1", "--m", "1", "--phi", "r2"]).status.code(), Some(1));
    assert_eq!(kysmooth(&["constant", "--eq", "dirac", "--d", "3", "--weight", "gauss:a=1", "--m", "1"]).status.code(), Some(1));
    assert_eq!(kysmooth(&["verify", "nope"]).status.code(), Some(1));
    assert_eq!(kysmooth(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn curve_is_deterministic_csv() {
    let args = ["curve", "--d", "3", "--weight", "power:s=2", "--psi", "matched", "--grid", "0.1:10:3", "--k", "1"];
    let a = kysmooth(&args);
    let b = kysmooth(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "r,value");
    assert_eq!(lines.len(), 4);
    let c1 = (2.0 * std::f64::consts::PI).powi(3) / 3.0;
    for l in &lines[1..] {
        let v: f64 = l.split(',').nth(1).unwrap().parse().unwrap();
        assert!((v / c1 - 1.0).abs() < 1e-9);
    }
}

#[test]
fn curve_json_and_out_file() {
    let dir = std::env::temp_dir().join(format!("kysmooth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.json");
    let out = kysmooth(&["curve", "--d", "2", "--weight", "gauss:a=1", "--grid", "0.5:2:5", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], "kysmooth.curve/v1");
    assert_eq!(v["value"].as_array().unwrap().len(), 5);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_reports_schema_and_seed() {
    let out = kysmooth(&["verify", "funk-hecke", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "kysmooth.verify/v1");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["passed"], true);
    assert_eq!(kysmooth(&["verify", "funk-hecke", "--seed", "42"]).stdout, out.stdout);
}

#[test]
fn verify_closed_form_reproduces_table() {
    let out = kysmooth(&["verify", "closed-form"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn failing_tolerance_exits_1() {
    let out = kysmooth(&["verify", "legendre", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn extremiser_constant_family_ratio_is_one() {
    let out = kysmooth(&["extremiser", "--d", "3", "--weight", "power:s=2", "--psi", "matched", "--eps", "0.3", "--grid", "1e-2:1e2:32", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "kysmooth.extremiser/v1");
    assert!((v["check"]["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(v["profile"].as_array().unwrap().len(), 401);
}

#[test]
fn extremiser_dirac_1d_reaches_99_percent() {
    let out = kysmooth(&["extremiser", "--eq", "dirac", "--d", "1", "--weight", "exp:a=1", "--psi", "powexp:p=1,b=0.5", "--m", "1", "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r,f0_0_re"));
    let summary: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(summary["check"]["ratio"].as_f64().unwrap() >= 0.99);
}

#[test]
fn extremiser_without_level_set_exits_2() {
    let out = kysmooth(&["extremiser", "--d", "1", "--weight", "exp:a=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("level set"));
}
