use std::path::PathBuf;
use std::process::{Command, Output};

fn burstic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burstic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("burstic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn single_user_point() {
    let out = burstic(&["single-user", "--p1", "3.5", "--eps1", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,eps,theta,nu,rate"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[2] - 0.76).abs() < 0.005);
    assert!((row[3] - 2.59).abs() < 0.005);
}

#[test]
fn thresholds_both_modes() {
    let out = burstic(&["two-user", "thresholds", "--p1", "3.5", "--p2", "3.5", "--eps1", "2", "--eps2", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[0] - 2.3).abs() < 0.05);
    assert_eq!(&row[2..], &[4.5, 4.5]);

    let out = burstic(&[
        "two-user", "thresholds", "--mode", "asymptotic", "--p1", "0.2", "--p2", "0.3", "--eps1",
        "0.01", "--eps2", "0.02",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().nth(1), Some("1.2,1.3,1.2,1.3"));
}

#[test]
fn sweep_marks_out_of_regime_cells() {
    let out = burstic(&["two-user", "sweep", "--sweep", "a", "--range", "0.5:1:0.5", "--schemes", "IV,I"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,R_I,R_IV,R_ub");
    assert!(lines[1].starts_with("0.5,") && lines[1].contains(",NA,"));
    assert!(!lines[2].contains("NA"));
    assert_eq!(lines.len(), 3);
}

#[test]
fn sweep_is_deterministic() {
    let args = ["cgzic", "sweep", "--range", "2:3:0.5", "--argmax", "IV", "--p1", "4", "--p2", "3.5", "--p3", "3"];
    let first = burstic(&args);
    let second = burstic(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert_eq!(
        text.lines().next(),
        Some("a1,R_I,R_II,R_III,R_IV,R_ub,theta1,theta2,theta3")
    );
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("preset.cfg");
    std::fs::write(&cfg, "# fig4-like preset\nb = 3\np1 = 3.5\np2 = 3.5\nsweep = a\nrange = 1:2:0.5\nschemes = II\n").unwrap();
    let path = cfg.to_str().unwrap();
    let out = burstic(&["two-user", "sweep", "--config", path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().nth(1), Some("1,1.29248,1.40609"));

    let out = burstic(&["two-user", "sweep", "--config", path, "--range", "3:3:1", "--schemes", "I"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("a,R_I,R_ub\n3,"));
}

#[test]
fn out_flag_writes_file() {
    let target = scratch("fig9.csv");
    let out = burstic(&["reproduce", "--figure", "fig9", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert_eq!(text.lines().next(), Some("a1,theta1,theta2,theta3"));
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn reproduce_fig6_has_no_scheme_iv() {
    let out = burstic(&["reproduce", "--figure", "fig6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("a,R_I,R_II,R_III,R_ub"));
    assert_eq!(text.lines().count(), 100);
}

#[test]
fn exit_codes() {
    assert_eq!(burstic(&["two-user", "sweep", "--sweep", "zz"]).status.code(), Some(2));
    assert_eq!(burstic(&["reproduce", "--figure", "fig3"]).status.code(), Some(2));
    assert_eq!(burstic(&["two-user", "sweep", "--range", "2:1:0.1"]).status.code(), Some(2));
    assert_eq!(burstic(&["single-user", "--p1", "1", "--eps1", "2"]).status.code(), Some(2));
    assert_eq!(burstic(&["two-user", "frobnicate"]).status.code(), Some(2));
    assert_eq!(burstic(&["two-user", "sweep", "--grid-res", "0"]).status.code(), Some(2));
    let out = burstic(&["two-user", "rate", "--scheme", "IV", "--a", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Scheme IV"));
    assert_eq!(burstic(&["cgzic", "rate", "--scheme", "IV", "--a2", "1.5"]).status.code(), Some(3));
}

#[test]
fn scalar_rate_query() {
    let out = burstic(&["two-user", "rate", "--scheme", "II", "--a", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..3], &["II", "1.29248", "1.40609"]);
    let thetas: Vec<f64> = row[3].split(';').map(|t| t.parse().unwrap()).collect();
    assert!((thetas[0] - 0.5).abs() < 0.005);
    assert!((thetas[0] + thetas[1] - 1.0).abs() < 1e-12);
}
