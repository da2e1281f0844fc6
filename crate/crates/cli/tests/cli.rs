use std::process::{Command, Output};

const RAYLEIGH: &str = r#"{"model":"Rayleigh","params":{"A":1}}"#;
const CASCADED: &str = r#"{"model":"CascadedRayleigh","params":{"gamma_corr":0,"A":1}}"#;

fn powertail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powertail")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|&h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn tail_matches_closed_form() {
    let o = powertail(&["tail", "--model", RAYLEIGH, "--grid", "-40:-10:10"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# powertail "));
    let exact = column(&text, "eps_exact");
    for (s, db) in exact.iter().zip([-40.0, -30.0, -20.0, -10.0]) {
        let p = 10f64.powf(db / 10.0);
        let v: f64 = s.parse().unwrap();
        assert!((v / -(-p).exp_m1() - 1.0).abs() < 1e-12);
    }
    assert!(column(&text, "within_tolerance").iter().all(|s| s == "true"));
}

#[test]
fn header_records_config_and_seed() {
    let a = stdout(&powertail(&["mc", "--model", RAYLEIGH, "--n", "1000", "--seed", "9", "--grid", "-20:0:10"]));
    let b = stdout(&powertail(&["mc", "--model", RAYLEIGH, "--n", "1000", "--seed", "10", "--grid", "-20:0:10"]));
    let first = |s: &str| s.lines().next().unwrap().to_string();
    assert!(first(&a).ends_with("seed=9"));
    assert!(first(&a).contains("command=mc config_sha256="));
    assert_ne!(first(&a).split(' ').nth(4), first(&b).split(' ').nth(4));
}

#[test]
fn json_output() {
    let o = powertail(&["curve", "--model", CASCADED, "--grid", "-30:-10:10", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["header"]["command"], "curve");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v["rows"][0]["phi"].is_null());
    assert!(v["rows"][0]["eps_tail"].as_f64().unwrap() > 0.0);
}

#[test]
fn model_from_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    std::fs::write(&model, RAYLEIGH).unwrap();
    let out = dir.path().join("inv.csv");
    let o = powertail(&["invert", "--model", model.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    for (e, back) in column(&text, "eps").iter().zip(column(&text, "eps_tail_at_P_R")) {
        let (e, back): (f64, f64) = (e.parse().unwrap(), back.parse().unwrap());
        assert!((back / e - 1.0).abs() < 1e-9);
    }
}

#[test]
fn mc_is_worker_independent() {
    let model = r#"{"model":"KappaMu","params":{"kappa":3.9,"mu":2,"A":1}}"#;
    let run = |w: &str| {
        let o = powertail(&["mc", "--model", model, "--n", "200000", "--chunk", "10000", "--workers", w]);
        assert_eq!(code(&o), 0);
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("16"));
}

#[test]
fn diversity_overlays() {
    let set = r#"{"branches":[{"model":"Rayleigh","params":{"A":1}},{"model":"LogNormal","params":{"sigma_dB":6,"mu_dB":0}}],"scheme":"MRC"}"#;
    let o = powertail(&["diversity", "--model", set, "--grid", "-20:0:10"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("# phi_mrc unavailable: branch 1"));
    assert!(column(&text, "phi_mrc").iter().all(String::is_empty));
    assert!(column(&text, "mrc_generic").iter().all(|s| s.parse::<f64>().unwrap() > 0.0));

    let o = powertail(&["diversity", "--model", set, "--scheme", "sc", "--grid", "-20:0:10", "--n", "10000"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(column(&text, "sc_exact").len() == 3);
    assert!(column(&text, "count").len() == 3);
}

#[test]
fn exit_codes() {
    // Malformed arguments.
    assert_eq!(code(&powertail(&["curve", "--model", RAYLEIGH, "--grid", "0:-1:1"])), 2);
    // Configuration errors.
    assert_eq!(code(&powertail(&["curve", "--model", r#"{"model":"Rayleigh","params":{"A":-1}}"#])), 2);
    assert_eq!(code(&powertail(&["curve", "--model", "/nonexistent/model.json"])), 2);
    assert_eq!(code(&powertail(&["mc", "--model", RAYLEIGH, "--n", "0"])), 2);
    let no_scheme = r#"{"branches":[{"model":"Rayleigh","params":{"A":1}}]}"#;
    let o = powertail(&["diversity", "--model", no_scheme]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--scheme"));
    let correlated = r#"{"branches":[{"model":"Rayleigh","params":{"A":1}}],"scheme":"SC","correlation":0.5}"#;
    assert_eq!(code(&powertail(&["diversity", "--model", correlated])), 2);
    // Numerical failure names the model.
    let o = powertail(&["invert", "--model", CASCADED, "--eps", "0.5"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("CascadedRayleigh at eps"));
    // Validation failure names the check.
    let o = powertail(&["validate", "--model", CASCADED, "--eta", "1e-6"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ratio_convergence"));
}

#[test]
fn validate_reports() {
    let o = powertail(&["validate", "--model", r#"{"model":"Nakagami","params":{"m":2,"A":1}}"#]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(column(&text, "check"), ["validity_bound", "sandwich", "ratio_convergence", "validity_bound_round_trip"]);

    let o = powertail(&["validate", "--model", r#"{"model":"LogNormal","params":{"sigma_dB":8,"mu_dB":0}}"#]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("phi unavailable; LN accuracy claim checked instead"));
    assert_eq!(column(&text, "status"), ["skipped", "pass"]);
}
