use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_causal-game"));
    cmd.env_remove("CAUSAL_GAME_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in:\n{text}"))
        .to_string()
}

#[test]
fn psucc_prints_nine_significant_digits() {
    let out = stdout(&["psucc", "--sigma-a", "1", "--sigma-b", "1", "--tau", "1", "--dt", "1"]);
    assert_eq!(field(&out, "p_succ"), "0.754578910");
    assert_eq!(field(&out, "violates_bound"), "true");
}

#[test]
fn psucc_at_threshold_is_exactly_the_bound() {
    let sigma = std::f64::consts::LN_2.sqrt().to_string();
    let out = stdout(&["psucc", "--sigma-a", &sigma, "--sigma-b", &sigma, "--tau", "1", "--dt", "0"]);
    assert_eq!(field(&out, "p_succ"), "0.750000000");
    assert_eq!(field(&out, "violates_bound"), "false");
}

#[test]
fn missing_flag_is_a_usage_error() {
    assert_eq!(run(&["psucc", "--tau", "1"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--sigma", "1", "--dt", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn invalid_parameters_are_runtime_errors() {
    let out = run(&["psucc", "--sigma-a", "-1", "--sigma-b", "1", "--tau", "1", "--dt", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = run(&["threshold", "--tau", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_csv_header_and_values() {
    let out = stdout(&["sweep", "--sigma", "0.5", "--tau", "1", "--dt", "0"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("sigma_a,sigma_b,tau,dt,p_ab,p_ba,p_succ,violates"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let p: f64 = row[6].parse().unwrap();
    assert!((p - 0.889_400_391_535_702_5).abs() < 1e-12, "{p}");
    assert_eq!(row[7], "true");
    assert_eq!(lines.next(), None);
}

#[test]
fn sweep_rows_round_trip_through_psucc() {
    let out = stdout(&["sweep", "--sigma", "0.3,0.9,2", "--tau", "1.5", "--dt-range", "-2:2:5"]);
    let mut n = 0;
    for line in out.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let json = stdout(&[
            "psucc", "--sigma-a", f[0], "--sigma-b", f[1], "--tau", f[2], "--dt", f[3], "--json",
        ]);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let expected: f64 = f[6].parse().unwrap();
        assert!((v["p_succ"].as_f64().unwrap() - expected).abs() <= 1e-12, "{line}");
        n += 1;
    }
    assert_eq!(n, 15);
}

#[test]
fn sweep_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let status = bin()
            .env("CAUSAL_GAME_THREADS", threads)
            .args(["sweep", "--sigma", "0.2,0.7,1.1", "--tau", "2", "--dt-range", "-3:3:61"])
            .arg("--output")
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweep_json_format() {
    let out = stdout(&["sweep", "--sigma", "0.5,1", "--tau", "1", "--dt", "0,1", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["sigma_a"], 0.5);
    assert_eq!(rows[1]["dt"], 1.0);
    assert_eq!(rows[2]["sigma_a"], 1.0);
}

#[test]
fn sweep_flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "sigma = [0.5]\ntau = 1.0\ndt = [0.0, 0.5]\nformat = \"json\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&stdout(&["sweep", "--config", cfg])).unwrap();
    assert_eq!(rows.len(), 2);

    let out = stdout(&["sweep", "--config", cfg, "--format", "csv", "--tau", "2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.5,0.5,2.0,0.0,"), "{}", lines[1]);
}

#[test]
fn threshold_matches_closed_form() {
    let out = stdout(&["threshold", "--tau", "1", "--dt", "0"]);
    let sigma: f64 = field(&out, "sigma").parse().unwrap();
    assert!(out.contains("0.83255461"));
    assert!((sigma - std::f64::consts::LN_2.sqrt()).abs() <= 1e-9);
}

#[test]
fn optimize_reports_regime() {
    let out = stdout(&["optimize", "--sigma", "0.5", "--tau", "1"]);
    assert_eq!(field(&out, "dt_star"), "0");
    assert_eq!(field(&out, "regime"), "C");
    let out = stdout(&["optimize", "--sigma", "3", "--tau", "1"]);
    assert_eq!(field(&out, "regime"), "A");
}

#[test]
fn montecarlo_is_seeded() {
    let args = [
        "montecarlo", "--sigma-a", "1", "--sigma-b", "1", "--tau", "1", "--dt", "1", "--rounds",
        "200000", "--seed", "42",
    ];
    let first = stdout(&args);
    assert_eq!(field(&first, "seed"), "42");
    assert_eq!(first, stdout(&args));
    let p: f64 = field(&first, "empirical_p_succ").parse().unwrap();
    let se: f64 = field(&first, "standard_error").parse().unwrap();
    assert!((p - 0.754_578_909_7).abs() < 5.0 * se);
}

#[test]
fn fock_demo_passes() {
    let out = stdout(&["fock-demo"]);
    assert!(out.lines().count() >= 10);
    assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = bin()
        .env("CAUSAL_GAME_THREADS", "many")
        .args(["threshold", "--tau", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
