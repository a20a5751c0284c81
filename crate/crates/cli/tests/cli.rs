use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_supersinglet"));
    c.env_remove("SUPERSINGLET_OUTPUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("supersinglet-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn json_field(text: &str, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    v[key].as_f64().unwrap()
}

#[test]
fn protocol_text_report() {
    let out = stdout_of(&["protocol", "--times", "23,1,45", "--g", "1", "--delta", "0", "--project", "ideal"]);
    assert!(out.contains("fidelity        0.976124194"), "{out}");
    assert!(out.contains("success_prob    0.629410989"), "{out}");
    assert!(out.contains("|fff>"));
}

#[test]
fn protocol_strong_coupling_json() {
    let out = stdout_of(&["protocol", "--times", "15,38,95", "--mhz-angular", "17.5", "--format", "json"]);
    assert!((json_field(&out, "fidelity") - 0.963001).abs() < 1e-6);
    assert!((json_field(&out, "success_prob") - 0.320).abs() < 1e-3);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["amplitudes"].as_array().unwrap().len(), 7);
}

#[test]
fn zero_times_give_product_state() {
    let out = stdout_of(&["protocol", "--times", "0,0,0", "--format", "csv"]);
    assert_eq!(
        out,
        "t1_us,t2_us,t3_us,g_rad_per_us,delta_rad_per_us,fidelity,success_prob\n0,0,0,1.00000000,0,0.166666667,1.00000000\n"
    );
}

#[test]
fn auxiliary_projection() {
    let out =
        stdout_of(&["protocol", "--times", "23,1,45", "--project", "aux", "--t-prime", "4.71", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["detection"]["vacuum_confidence"].as_f64().unwrap() > 0.982);
    assert!(!run(&["protocol", "--times", "23,1,45", "--project", "aux"]).status.success());
}

#[test]
fn invalid_input_exits_nonzero() {
    for args in [
        &["protocol", "--times", "1,2"][..],
        &["protocol", "--times", "1,-2,3"],
        &["protocol", "--times", "1,2,3", "--g", "0"],
        &["protocol", "--times", "1,2,3", "--cutoff", "2"],
        &["reproduce", "--table", "5"],
        &["scan", "--t1", "1", "--t2", "3:1:1", "--t3", "1"],
        &["scan", "--t1", "1", "--t2", "1", "--t3", "1", "--g1", "1", "--g2", "2"],
        &["detect", "--input", "fock:x", "--t-prime", "1"],
        &["detect", "--input", "/nonexistent/state.json", "--t-prime", "1"],
    ] {
        assert!(!run(args).status.success(), "{args:?} should fail");
    }
}

#[test]
fn reproduce_is_stable() {
    let a = stdout_of(&["reproduce", "--table", "1"]);
    let b = stdout_of(&["reproduce", "--table", "1"]);
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("t1_us,t2_us,t3_us,g_rad_per_us,delta_rad_per_us,fidelity,success_prob"));
    assert!(lines.any(|l| l == "23.0000000,1.00000000,45.0000000,1.00000000,0,0.976124194,0.629410989"));
    assert_eq!(a.lines().count(), 27);
    assert!(!a.contains('\r'));
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch("config");
    let cfg = dir.join("run.conf");
    fs::write(&cfg, "# strong coupling\ng = 17.5\ndelta = 1.75\nformat = json\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = stdout_of(&["--config", cfg, "protocol", "--times", "18,27,50"]);
    assert!((json_field(&out, "fidelity") - 0.921186).abs() < 1e-6);
    let out = stdout_of(&["--config", cfg, "protocol", "--times", "15,38,95", "--delta", "0"]);
    assert!((json_field(&out, "fidelity") - 0.963001).abs() < 1e-6);
    let out = stdout_of(&["--config", cfg, "protocol", "--times", "5,1,2", "--g", "1", "--delta-over-g", "0.1"]);
    assert!((json_field(&out, "fidelity") - 0.923425).abs() < 1e-6);
}

#[test]
fn output_goes_under_output_dir() {
    let dir = scratch("outdir");
    let status = bin()
        .env("SUPERSINGLET_OUTPUT_DIR", &dir)
        .args(["reproduce", "--table", "3", "--output", "sub/t3.csv"])
        .status()
        .unwrap();
    assert!(status.success());
    let written = fs::read_to_string(dir.join("sub/t3.csv")).unwrap();
    assert_eq!(written, stdout_of(&["reproduce", "--table", "3"]));
}

#[test]
fn scan_and_sweep() {
    let out = stdout_of(&["scan", "--t1", "23", "--t2", "0:2:1", "--t3", "45"]);
    assert_eq!(out.lines().count(), 4);
    assert!(out.contains("23.0000000,1.00000000,45.0000000,1.00000000,0,0.976124194,0.629410989"));
    let out = stdout_of(&["sweep-detuning", "--times", "23,1,45", "--delta-range", "0:1:0.05", "--relative"]);
    let fids: Vec<f64> = out.lines().skip(1).map(|l| l.rsplit(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(fids.len(), 21);
    assert!(fids[1..].iter().all(|&f| f <= fids[0]));
}

#[test]
fn surface_and_refine() {
    let out = stdout_of(&["surface", "--t1", "23", "--t2", "0:2:1", "--t3", "44:46:1"]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines.len(), 5);
    assert!(lines[3].starts_with("1.00000000,"));
    let out = stdout_of(&["refine", "--times", "23,1,45", "--radius", "0.5", "--tol", "0.01"]);
    let f: f64 = out.lines().nth(1).unwrap().rsplit(',').nth(1).unwrap().parse().unwrap();
    assert!(f >= 0.976124194);
}

#[test]
fn detect_modes_and_state_files() {
    let out = stdout_of(&["detect", "--input", "fock:1", "--t-prime", "4.71"]);
    let residual: f64 = out.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(residual < 1e-5);

    let out = stdout_of(&["detect", "--input", "fock:2", "--t-prime-window", "4:5", "--num-aux", "2"]);
    assert_eq!(out.lines().count(), 3);

    let dir = scratch("state");
    let state = dir.join("joint.json");
    stdout_of(&["protocol", "--times", "23,1,45", "--dump-joint", state.to_str().unwrap()]);
    let from_file = stdout_of(&["detect", "--input", state.to_str().unwrap(), "--t-prime", "4.71"]);
    let direct = stdout_of(&["detect", "--input", "protocol:23,1,45", "--t-prime", "4.71"]);
    assert_eq!(from_file, direct);
    assert!(direct.contains("# fidelity"));
}

#[test]
fn oracle_check_exit_status() {
    let out = stdout_of(&["oracle-check", "--samples", "20", "--t-max", "10"]);
    assert!(out.contains("failures 0"), "{out}");
    let strict = run(&["oracle-check", "--samples", "5", "--t-max", "10", "--tolerance", "1e-30"]);
    assert!(!strict.status.success());
}
