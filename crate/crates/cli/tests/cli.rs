use std::process::{Command, Output};

const SMALL: [&str; 8] = ["--p", "5", "--prec", "20", "--match-digits", "12", "--samples", "5"];

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kim-verify"));
    cmd.args(args).env_remove("KIM_VERIFY_CACHE_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_s2_passes() {
    let o = run(&[&["verify-s2"], &SMALL[..]].concat(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("overall: PASS"));
    assert!(out.contains("PASS       common zero 1/2"));
}

#[test]
fn verify_z_and_constants_pass() {
    let o = run(&["verify-z", "--p", "7", "--prec", "20", "--match-digits", "12", "--kmax", "3"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("candidate residue 3 (1 - z has residue 5)"));
    let o = run(&[&["constants"], &SMALL[..]].concat(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reconstruction 7/8"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let o = run(&["verify-s2", "--p", "9"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not an odd prime"));
    let o = run(&["verify-s2", "--p", "5", "--prec", "20", "--match-digits", "13"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sweep", "--primes", "3,4"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["no-such-command"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing/report.json");
    let o = run(&[&["constants"], &SMALL[..], &["--out", out.to_str().unwrap()]].concat(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing"));
}

#[test]
fn json_report_and_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("report.json");
    let args = [&["build"], &SMALL[..], &["--format", "json", "--out", out.to_str().unwrap()]].concat();
    let o = run(&args, &[("KIM_VERIFY_CACHE_DIR", cache.to_str().unwrap())]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "build");
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
}

#[test]
fn sweep_prints_a_row_per_prime() {
    let o = run(&["sweep", "--primes", "3,5", "--prec", "20", "--match-digits", "12", "--samples", "3"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| l.contains("{2, 1/2, -1}")).collect();
    assert_eq!(rows.len(), 2, "{out}");
    assert!(out.trim_end().ends_with("overall: PASS"));
}
