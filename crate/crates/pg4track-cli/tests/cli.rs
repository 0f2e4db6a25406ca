//! End-to-end tests against the compiled binary: exit codes, file formats and
//! determinism across thread counts.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pg4track"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn construct_writes_track_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["construct", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("size=11"), "stdout: {text}");
    assert!(text.contains("three_nonsquare=true"));
    let file: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("track_q5.json")).unwrap())
            .unwrap();
    assert_eq!(file["q"], 5);
    assert_eq!(file["family"], "track");
    let points = file["points"].as_array().unwrap();
    assert_eq!(points.len(), 11);
    assert_eq!(points[0], serde_json::json!([1, 0, 0, 0, 0]));
}

#[test]
fn construct_refuses_square_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["construct", "--q", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 is a square"));
    assert!(!dir.path().join("track_q13.json").exists());
    let out = run_in(dir.path(), &["construct", "--q", "13", "--force"]);
    assert_eq!(out.status.code(), Some(0));
    let file: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("track_q13.json")).unwrap())
            .unwrap();
    assert_eq!(file["points"].as_array().unwrap().len(), 27);
}

#[test]
fn verify_q5_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["verify", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["q"], 5);
    assert_eq!(v["is_track"], true);
    assert_eq!(v["violation"], Value::Null);
    assert_eq!(v["is_complete"], true);
    assert_eq!(v["covered"], 781);
    assert_eq!(v["p4_size"], 781);
}

#[test]
fn verify_q13_forced_reports_violation() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["verify", "--q", "13", "--force"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_stdout(&out);
    assert_eq!(v["is_track"], false);
    assert_eq!(v["violation"], serde_json::json!([0, 1, 16, 26]));
    assert_eq!(v["is_complete"], Value::Null);
    // without --force the hypothesis is refused
    let out = run_in(dir.path(), &["verify", "--q", "13"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_curve_only_input_is_incomplete() {
    // the normal rational curve alone: (0,0,0,1,0) can always be added
    let dir = tempfile::tempdir().unwrap();
    let mut points = vec![];
    for t in 0u64..5 {
        points.push(vec![1, t, t * t % 5, t.pow(3) % 5, t.pow(4) % 5]);
    }
    points.push(vec![0, 0, 0, 0, 1]);
    let path = dir.path().join("curve.json");
    std::fs::write(
        &path,
        serde_json::json!({"q": 5, "points": points}).to_string(),
    )
    .unwrap();
    let out = run_in(dir.path(), &["verify", "--input", "curve.json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_stdout(&out);
    assert_eq!(v["is_track"], true);
    assert_eq!(v["is_complete"], false);
    let addable = v["addable"].as_array().unwrap();
    assert!(addable.contains(&serde_json::json!([0, 0, 0, 1, 0])));
}

#[test]
fn malformed_input_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"q\": 5, \"points\": [[0,0").unwrap();
    let out = run_in(dir.path(), &["verify", "--input", "bad.json"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run_in(dir.path(), &["verify", "--input", "missing.json"]);
    assert_eq!(out.status.code(), Some(3));
    // duplicate points are rejected too
    std::fs::write(
        dir.path().join("dup.json"),
        serde_json::json!({"q": 5, "points": [[1,1,1,1,1],[2,2,2,2,2],[0,1,0,0,0],[1,0,0,0,0]]})
            .to_string(),
    )
    .unwrap();
    let out = run_in(dir.path(), &["verify", "--input", "dup.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_and_help() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["verify", "--nonsense"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run_in(dir.path(), &["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("pg4track"));
    let out = run_in(dir.path(), &["verify"]);
    assert_eq!(out.status.code(), Some(3), "needs --q or --input");
}

#[test]
fn cover_gap_exhaustive_q5() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["cover-gap", "--q", "5", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let gaps = v["gaps"].as_array().unwrap();
    assert_eq!(gaps.len(), 130);
    for g in gaps {
        assert!(g["witness"].is_array(), "every gap carries a witness: {g}");
    }
}

#[test]
fn cover_gap_sampled_q89_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["cover-gap", "--q", "89", "--sample", "5000", "--seed", "42"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["mode"], "sampled");
    assert_eq!(v["gaps"].as_array().unwrap().len(), 0);
}

#[test]
fn cover_exhaustive_q5_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["cover", "--q", "5", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["targets"], 625);
    assert_eq!(v["on_track"], 5);
    assert_eq!(v["uncovered"].as_array().unwrap().len(), 40);
    let a = v["route_a"].as_u64().unwrap();
    let b = v["route_b"].as_u64().unwrap();
    assert_eq!(a + b, 625 - 5 - 40);
}

#[test]
fn cover_single_point_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["curve", "--q", "17", "--point", "1,2,3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["target"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(v["route"], "B");
    assert_eq!(v["u"], 0);
    assert_eq!(v["t"], 1);
    assert_eq!(v["s"], Value::Null);
    assert_eq!(v["curve_points"], 20);
    assert_eq!(v["F_is_square"], false);
    // an on-track target
    let out = run_in(dir.path(), &["cover", "--q", "5", "--point", "2,4,3,1"]);
    let v = json_stdout(&out);
    assert_eq!(v["route"], "on_track");
}

#[test]
fn code_and_bounds_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["code", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["n"], 11);
    assert_eq!(v["k"], 6);
    assert_eq!(v["d"], 5);
    assert_eq!(v["dual_d"], 5);
    assert_eq!(v["amds"], true);
    assert_eq!(v["nmds"], false);
    assert_eq!(v["upper_bound"], 20);
    let out = run_in(dir.path(), &["bounds", "--q", "7"]);
    let v = json_stdout(&out);
    assert_eq!(v["track_size"], 15);
    assert_eq!(v["upper_bound"], 30);
    assert_eq!(v["elliptic_size"], 13);
    assert_eq!(v["dodunekov"], 19);
}

#[test]
fn report_csv_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["report", "--qmax", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "q,size,is_track,is_complete,d,dual_d,upper_bound,elliptic_size"
    );
    assert_eq!(lines[1], "5,11,true,true,5,5,20,10");
    // q = 7 genuinely admits 21 extension points; the report says so
    assert_eq!(lines[2], "7,15,true,false,5,7,30,13");
    assert_eq!(lines.len(), 3);
    // byte-identical across thread counts
    let one = run_in(dir.path(), &["--threads", "1", "report", "--qmax", "7"]);
    let two = run_in(dir.path(), &["--threads", "2", "report", "--qmax", "7"]);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn sampled_outputs_are_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cover", "--q", "89", "--sample", "2000", "--seed", "7"];
    let a = run_in(dir.path(), &args);
    let b = bin()
        .current_dir(dir.path())
        .args(["--threads", "1"])
        .args(args)
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json_stdout(&a);
    assert_eq!(v["targets"], 2000);
    assert_eq!(v["uncovered"].as_array().unwrap().len(), 0);
}

#[test]
fn complete_subcommand_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["complete", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    // q = 7: a track, but extendable
    let out = run_in(dir.path(), &["complete", "--q", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_stdout(&out);
    assert_eq!(v["is_complete"], false);
    assert_eq!(v["addable"].as_array().unwrap().len(), 21);
}
