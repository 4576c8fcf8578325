use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn capset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capset"))
        .args(args)
        .env_remove("CAPSET_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn write_set(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_two_points_in_f3() {
    let dir = TempDir::new().unwrap();
    let set = write_set(&dir, "a.txt", "# two points\n0\n1\n");
    let out = capset(&["analyze", "--q", "3", "--r", "1", "--set", &set]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], "capset-increment/1");
    assert_eq!(v["alpha"], "2/3");
    assert_eq!(v["lambda_ap"], "2/9");
    assert_eq!(v["bound"], "1/1");
    assert_eq!(v["certificate"]["alpha0"], "1/1");
    assert_eq!(v["pass"], true);
}

#[test]
fn analyze_rejects_a_progression() {
    let dir = TempDir::new().unwrap();
    let set = write_set(&dir, "a.txt", "0\n1\n2\n");
    let out = capset(&["analyze", "--q", "3", "--r", "1", "--set", &set]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["progression_free"], false);
    assert_eq!(v["violating_triple"], serde_json::json!([[0], [1], [2]]));
}

#[test]
fn analyze_empty_set_has_negative_bound() {
    let dir = TempDir::new().unwrap();
    let set = write_set(&dir, "a.txt", "");
    let out = capset(&["analyze", "--q", "3", "--r", "1", "--set", &set]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["bound"], "-1/3");
}

#[test]
fn malformed_set_file_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let set = write_set(&dir, "a.txt", "0,1\n7,0\n");
    let out = capset(&["analyze", "--q", "3", "--r", "2", "--set", &set]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn bad_parameters_are_usage_errors() {
    assert_eq!(code(&capset(&["verify", "--q", "2", "--r", "1"])), 2);
    assert_eq!(code(&capset(&["verify", "--q", "6", "--r", "1"])), 2);
    assert_eq!(code(&capset(&["verify", "--q", "3", "--r", "0"])), 2);
    assert_eq!(code(&capset(&["bound", "--q", "4", "--r-max", "3"])), 2);
    assert_eq!(code(&capset(&["bound", "--q", "3", "--r-max", "1001"])), 2);
    assert_eq!(
        code(&capset(&[
            "search",
            "--q",
            "3",
            "--r",
            "5",
            "--mode",
            "exhaustive"
        ])),
        2
    );
}

#[test]
fn verify_reports_every_check() {
    let out = capset(&[
        "verify", "--q", "3", "--r", "2", "--trials", "5", "--seed", "7",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["checks_run"], 15);
    assert_eq!(v["checks_failed"], 0);
    assert_eq!(v["seed"], 7);
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn seed_falls_back_to_the_environment() {
    let args = ["verify", "--q", "5", "--r", "1", "--trials", "3"];
    let from_env = Command::new(env!("CARGO_BIN_EXE_capset"))
        .args(args)
        .env("CAPSET_SEED", "11")
        .output()
        .unwrap();
    let explicit = capset(&[&args[..], &["--seed", "11"]].concat());
    assert_eq!(code(&from_env), 0);
    assert_eq!(from_env.stdout, explicit.stdout);
    assert_eq!(json(&from_env)["seed"], 11);
}

#[test]
fn timing_flag_adds_wall_time() {
    let out = capset(&[
        "--timing", "verify", "--q", "3", "--r", "1", "--trials", "2",
    ]);
    assert!(json(&out)["wall_time_ms"].is_u64());
}

#[test]
fn bound_table_for_q3_and_q5() {
    let out = capset(&["bound", "--q", "3", "--r-max", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "r,t\n0,1/1\n1,2/3\n2,7/15\n"
    );
    let out = capset(&["bound", "--q", "5", "--r-max", "1"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "r,t\n0,1/1\n1,3/5\n");
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("max r*T(r) = "));
}

#[test]
fn iterate_writes_json_and_csv() {
    let dir = TempDir::new().unwrap();
    let set = write_set(&dir, "a.txt", "0\n1\n");
    let csv = dir.path().join("trace.csv");
    let out = capset(&[
        "iterate",
        "--q",
        "3",
        "--r",
        "1",
        "--set",
        &set,
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["sound"], true);
    assert_eq!(v["steps"].as_array().unwrap().len(), 2);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "rank,numerator,denominator,bound_num,bound_den,normal,level"
    );
    assert_eq!(lines[1], "1,2,3,1,1,(1),0");
    assert_eq!(lines[2], "0,1,1,,,,");
}

#[test]
fn iterate_from_search_descends_to_rank_zero() {
    let out = capset(&[
        "iterate", "--q", "3", "--r", "3", "--search", "random", "--seed", "4",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["rank"], 0);
    assert_eq!(steps.last().unwrap()["alpha"], "1/1");
}

#[test]
fn iterate_requires_a_source() {
    assert_eq!(code(&capset(&["iterate", "--q", "3", "--r", "1"])), 2);
}

#[test]
fn search_output_round_trips_through_analyze() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cap.txt");
    let p = path.to_str().unwrap();
    let out = capset(&[
        "search",
        "--q",
        "3",
        "--r",
        "2",
        "--mode",
        "exhaustive",
        "--out",
        p,
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(Path::new(p)).unwrap();
    assert!(text.starts_with("# q=3 r=2 mode=exhaustive seed=0 size=4\n"));
    let out = capset(&["analyze", "--q", "3", "--r", "2", "--set", p]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["alpha"], "4/9");
}

#[test]
fn iterate_on_empty_set_is_one_row() {
    let dir = TempDir::new().unwrap();
    let set = write_set(&dir, "a.txt", "");
    let csv = dir.path().join("trace.csv");
    let out = capset(&[
        "iterate",
        "--q",
        "3",
        "--r",
        "2",
        "--set",
        &set,
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 2);
    assert_eq!(json(&out)["steps"].as_array().unwrap().len(), 1);
}
