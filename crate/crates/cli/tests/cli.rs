use std::path::PathBuf;
use std::process::{Command, Output};

fn fwsw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwsw")).args(args).output().expect("running fwsw")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fwsw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn nodes_csv_on_stdout() {
    let out = fwsw(&["nodes", "--M", "2", "--family", "lobatto"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,M,index,node,weight,lebesgue");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("lobatto,2,2,1.00000000000000e0,5.00000000000000e-1"));
}

#[test]
fn config_file_then_flags() {
    let cfg = scratch("nodes.toml");
    std::fs::write(&cfg, "[nodes]\nfamily = \"legendre\"\nnodes = 5\n").unwrap();
    let from_file = fwsw(&["--config", cfg.to_str().unwrap(), "nodes"]);
    assert!(from_file.status.success());
    assert_eq!(String::from_utf8_lossy(&from_file.stdout).lines().count(), 6);

    let overridden = fwsw(&["--config", cfg.to_str().unwrap(), "nodes", "--M", "2"]);
    let text = String::from_utf8(overridden.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().starts_with("legendre,2,"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let cfg = scratch("bad.toml");
    std::fs::write(&cfg, "[nodes]\nfamily = \"radau\"\n[nonsense]\nx = 1\n").unwrap();
    let out = fwsw(&["--config", cfg.to_str().unwrap(), "nodes"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(fwsw(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(fwsw(&["nodes", "--M", "0"]).status.code(), Some(1));
    assert_eq!(fwsw(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_and_metrics_files() {
    let csv = scratch("stiff.csv");
    let json = scratch("stiff.json");
    let out = fwsw(&[
        "stiff-limit",
        "--M-max",
        "4",
        "--out",
        csv.to_str().unwrap(),
        "--metrics",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 5);
    let metrics: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(metrics.as_array().unwrap().len(), 4);
}

#[test]
fn single_sweep_gravity_waves_report_instability() {
    // one sweep is unstable for large fast CFL numbers
    let out = fwsw(&["boussinesq", "--smoke", "--K", "1", "--t-end", "3000"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"unstable\": true"));
}

#[test]
fn bad_scheme_name() {
    let out = fwsw(&["multiscale", "--scheme", "rk4"]);
    assert_eq!(out.status.code(), Some(1));
}
