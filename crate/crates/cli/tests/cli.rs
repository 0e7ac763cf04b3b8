use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cauchy-schemes")).args(args).output().expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn subcommand_writes_profile_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--out", &out_arg(dir.path()), "ift-domain", "problem=scalar", "ray=1", "steps=0.1,0.5,0.9,1.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let profile = fs::read_to_string(dir.path().join("ift-domain/profile.csv")).unwrap();
    let lines: Vec<&str> = profile.lines().collect();
    assert_eq!(lines[0], "magnitude,status,u_norm");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..4].iter().all(|l| l.contains("cauchy-accepted")));
    assert!(!lines[4].contains("cauchy-accepted"));
    assert!(fs::read_to_string(dir.path().join("report.txt")).unwrap().contains("summary: 2/2"));
}

#[test]
fn fem_converge_reports_orders() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--out", &out_arg(dir.path()), "fem-converge", "levels=5", "problem=sinsin"]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("PASS l2-order") && stdout.contains("PASS h1-order"), "{stdout}");
    let diag = fs::read_to_string(dir.path().join("fem-converge/diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().count(), 6);
}

#[test]
fn unknown_key_exits_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let o = run(&["--out", &out_arg(&out), "fem-converge", "levls=5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
    assert!(!out.exists());
}

#[test]
fn empty_run_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--out", &out_arg(dir.path())]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("experiments: 0"));
}

#[test]
fn failing_check_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // x = y has no jump to detect
    let o = run(&["--out", &out_arg(dir.path()), "counterexample", "x=1", "y=1", "k_max=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL limit-jump"));
}

#[test]
fn config_selection_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "seed = 1\n[a]\nkind = ift-solve\nsamples = 3\n[b]\nkind = counterexample\nk_max = 1\n").unwrap();
    let cfg = out_arg(&cfg);
    let read = |out: &Path| fs::read_to_string(out.join("a/solution.csv")).unwrap();

    let (o1, o2, o3) = (dir.path().join("o1"), dir.path().join("o2"), dir.path().join("o3"));
    assert!(run(&["--config", &cfg, "--out", &out_arg(&o1), "--experiment", "a"]).status.success());
    assert!(!o1.join("b").exists());
    assert!(run(&["--config", &cfg, "--out", &out_arg(&o2), "--experiment", "a"]).status.success());
    assert_eq!(read(&o1), read(&o2));
    assert!(run(&["--config", &cfg, "--out", &out_arg(&o3), "--experiment", "a", "--seed", "2"]).status.success());
    assert_ne!(read(&o1), read(&o3));

    let bad = run(&["--config", &cfg, "--out", &out_arg(&o1), "--experiment", "zzz"]);
    assert_eq!(bad.status.code(), Some(2));
}
