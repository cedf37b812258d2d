//! Binary-level checks: flag handling, report files, exit codes.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evoreduce"))
}

fn write_toy_csv(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("toy.csv");
    let mut body = String::from("a,b,label\n");
    for i in 0..40 {
        body.push_str(&format!(
            "{},{},{}\n",
            i % 2,
            (i * 7) % 11,
            if i % 2 == 0 { "no" } else { "yes" }
        ));
    }
    fs::write(&path, body).unwrap();
    path
}

fn fast_args(data: &Path, out: &Path) -> Vec<String> {
    [
        "--data",
        data.to_str().unwrap(),
        "--runs",
        "2",
        "--folds",
        "5",
        "--pop",
        "8",
        "--gens",
        "2",
        "--seed",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

#[test]
fn writes_summary_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let out = dir.path().join("results");
    let cmd = bin().args(fast_args(&data, &out)).output().unwrap();
    assert!(cmd.status.success(), "stderr: {}", String::from_utf8_lossy(&cmd.stderr));
    let stdout = String::from_utf8(cmd.stdout).unwrap();
    assert!(stdout.contains("Data\tFeatures\tSelected"), "stdout:\n{}", stdout);
    assert!(stdout.contains("run 0\t"), "stdout:\n{}", stdout);
    let summary = fs::read_to_string(out.join("summary.tsv")).unwrap();
    assert!(summary.starts_with("Data\t"));
    assert!(summary.lines().nth(1).unwrap().starts_with("toy\t2\t"));
    let report = fs::read_to_string(out.join("report.json")).unwrap();
    assert!(report.contains("\"records\""));
    assert!(!out.join("front.tsv").exists());
}

#[test]
fn fixed_seed_reproduces_reports_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let out1 = dir.path().join("r1");
    let out2 = dir.path().join("r2");
    assert!(bin().args(fast_args(&data, &out1)).output().unwrap().status.success());
    assert!(bin().args(fast_args(&data, &out2)).output().unwrap().status.success());
    assert_eq!(
        fs::read(out1.join("summary.tsv")).unwrap(),
        fs::read(out2.join("summary.tsv")).unwrap()
    );
    assert_eq!(
        fs::read(out1.join("report.json")).unwrap(),
        fs::read(out2.join("report.json")).unwrap()
    );
    // a different seed must change the report
    let out3 = dir.path().join("r3");
    let mut args = fast_args(&data, &out3);
    let seed_pos = args.iter().position(|a| a == "--seed").unwrap();
    args[seed_pos + 1] = "12".to_string();
    assert!(bin().args(&args).output().unwrap().status.success());
    assert_ne!(
        fs::read(out1.join("report.json")).unwrap(),
        fs::read(out3.join("report.json")).unwrap()
    );
}

#[test]
fn emit_front_adds_the_front_table() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let out = dir.path().join("results");
    let mut args = fast_args(&data, &out);
    args.push("--emit-front".to_string());
    assert!(bin().args(&args).output().unwrap().status.success());
    let front = fs::read_to_string(out.join("front.tsv")).unwrap();
    assert!(front.starts_with("run\trank\tgain\terror\tselected\tdiscretized"));
    assert!(front.lines().count() > 1);
}

#[test]
fn wrapper_score_columns_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let out = dir.path().join("results");
    let mut args = fast_args(&data, &out);
    args.push("--report-wrapper-score".to_string());
    assert!(bin().args(&args).output().unwrap().status.success());
    let summary = fs::read_to_string(out.join("summary.tsv")).unwrap();
    assert!(summary.lines().next().unwrap().ends_with("Wrapper Score\tStd."));
    assert_eq!(summary.lines().nth(1).unwrap().split('\t').count(), 11);
}

#[test]
fn out_dir_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let out = dir.path().join("from-env");
    let mut args = fast_args(&data, &out);
    let pos = args.iter().position(|a| a == "--out").unwrap();
    args.drain(pos..pos + 2);
    let cmd = bin()
        .args(&args)
        .env("EVOREDUCE_OUT", &out)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(cmd.status.success(), "stderr: {}", String::from_utf8_lossy(&cmd.stderr));
    assert!(out.join("summary.tsv").exists());
}

#[test]
fn label_column_can_be_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("named.csv");
    let mut body = String::from("label,a,b\n");
    for i in 0..30 {
        body.push_str(&format!("{},{},{}\n", if i % 2 == 0 { "x" } else { "y" }, i % 2, i % 5));
    }
    fs::write(&path, body).unwrap();
    let out = dir.path().join("results");
    let cmd = bin()
        .args([
            "--data",
            path.to_str().unwrap(),
            "--label-col",
            "label",
            "--runs",
            "1",
            "--folds",
            "5",
            "--pop",
            "6",
            "--gens",
            "1",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(cmd.status.success(), "stderr: {}", String::from_utf8_lossy(&cmd.stderr));
}

#[test]
fn missing_file_fails_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let cmd = bin()
        .args(["--data", dir.path().join("absent.csv").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!cmd.status.success());
    assert!(String::from_utf8_lossy(&cmd.stderr).contains("error"));
}

#[test]
fn unknown_learner_fails_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let cmd = bin()
        .args(["--data", data.to_str().unwrap(), "--learner", "mlp"])
        .output()
        .unwrap();
    assert!(!cmd.status.success());
    assert!(String::from_utf8_lossy(&cmd.stderr).contains("unknown learner"));
}

#[test]
fn too_many_folds_for_the_data_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let cmd = bin()
        .args(["--data", data.to_str().unwrap(), "--folds", "50", "--runs", "1"])
        .output()
        .unwrap();
    assert!(!cmd.status.success());
}
