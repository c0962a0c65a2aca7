use std::process::Command;

use serde_json::Value;
use weighted_tree_games::cli::TranscriptFile;
use weighted_tree_games::harness::replay;

fn wtg(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_wtg")).args(args).env("WTG_THREADS", "2").output().unwrap()
}

fn lines(out: &std::process::Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn mapping_records_respect_the_bound() {
    let out = wtg(&["play", "--game", "mapping", "--n", "100", "--b", "3", "--reps", "10", "--seed", "7"]);
    assert!(out.status.success());
    let records = lines(&out);
    assert_eq!(records.len(), 11);
    for r in &records[..10] {
        assert!(r["cost"].as_f64().unwrap() <= 400.0);
        assert_eq!(r["failed"], false);
        assert_eq!(r["seed"], 7);
    }
    let summary = &records[10]["summary"];
    assert_eq!(summary["bound"], 400.0);
    assert_eq!(summary["failures"], 0);
    assert_eq!(summary["config"]["game"], "mapping");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["play", "--game", "arb", "--n", "120", "--b", "2", "--breaker", "random", "--reps", "5", "--seed", "3"];
    let a = wtg(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_wtg")).args(args).env("WTG_THREADS", "1").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_and_json_agree() {
    let base = ["play", "--game", "greedy", "--n", "150", "--b", "1", "--reps", "4", "--seed", "12"];
    let json = lines(&wtg(&[&base[..], &["--format", "json"]].concat()));
    let csv = String::from_utf8(wtg(&[&base[..], &["--format", "csv"]].concat()).stdout).unwrap();
    let mut blocks = csv.split("\n\n");
    let reps: Vec<&str> = blocks.next().unwrap().lines().skip(1).collect();
    assert_eq!(reps.len(), 4);
    for (row, rec) in reps.iter().zip(&json) {
        let cost: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(cost, rec["cost"].as_f64().unwrap());
    }
    let summary: Vec<&str> = blocks.next().unwrap().lines().nth(1).unwrap().split(',').collect();
    let mean: f64 = summary[5].parse().unwrap();
    assert_eq!(mean, json[4]["summary"]["mean"].as_f64().unwrap());
}

#[test]
fn transcripts_round_trip_through_replay() {
    let path = std::env::temp_dir().join(format!("wtg-cli-{}.json", std::process::id()));
    let out = wtg(&[
        "play", "--game", "tree", "--n", "60", "--b", "1", "--reps", "3", "--seed", "5", "--transcripts",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let file: TranscriptFile = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(file.schema_version, 1);
    assert_eq!(file.transcripts.len(), 3);
    for t in &file.transcripts {
        assert!(replay(t).unwrap().is_ok());
    }
}

#[test]
fn config_errors_exit_with_2() {
    for args in [
        &["play", "--game", "arb", "--n", "10", "--b", "1", "--reps", "1", "--seed", "1", "--breaker", "minima"][..],
        &["play", "--game", "mapping", "--n", "10", "--b", "1", "--reps", "0", "--seed", "1"],
        &["play", "--game", "galaxy", "--n", "10", "--b", "1", "--reps", "1", "--seed", "1"],
        &["constants", "--b", "1", "--curve", "tau", "--grid", "1:2"],
    ] {
        let out = wtg(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn constants_command() {
    let out = wtg(&["constants", "--b", "1", "--n", "100"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mu"], 1.0);
    assert_eq!(format!("{:.4}", v["theta_star"].as_f64().unwrap()), "0.2938");
    assert_eq!(v["bounds"]["mapping_breaker_first"], 200.0);
    assert!((v["zeta3"].as_f64().unwrap() - 1.2020569).abs() < 1e-3);

    let out = wtg(&["constants", "--b", "1", "--n", "50", "--curve", "t", "--grid", "1:5:1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["k,t", "1,2.0", "2,4.0", "3,6.0", "4,8.0", "5,10.0"]);
}
