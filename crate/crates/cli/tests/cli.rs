use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn augsimp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_augsimp")).args(args).env_remove("AUGSIMP_CAP").output().unwrap()
}

fn json(out: &[u8]) -> Value {
    serde_json::from_slice(out).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(out)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const T3: &str = "# full transformation monoid on three points\n3\n2 1 3\n2 3 1\n1 1 3\n";

#[test]
fn analyze_t3_is_simple() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t3.txt", T3);
    let out = augsimp(&["analyze", &f]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out.stdout);
    assert_eq!(doc["report"]["verdict"], "simple");
    assert_eq!(doc["report"]["incidence_rank"], 3);
    assert_eq!(doc["report"]["monoid_size"], 27);
}

#[test]
fn construct_then_analyze_bprime_r5() {
    let dir = TempDir::new().unwrap();
    let sys = dir.path().join("b5.sys");
    let out = augsimp(&["construct", "--family", "general", "--r", "5", "--variant", "Bprime", "--out", sys.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let built = json(&out.stdout);
    let analyzed = json(&augsimp(&["analyze", sys.to_str().unwrap()]).stdout);
    assert_eq!(analyzed["report"]["verdict"], "not-simple");
    assert!(analyzed["report"]["wperp_dim"].as_u64().unwrap() >= 1);
    assert_eq!(built["analysis"], analyzed["report"]);
}

#[test]
fn construct_round_trips_for_every_family() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 5] = [
        &["--family", "r3", "--selection", "1,2,4"],
        &["--family", "r4", "--example", "nonsimple"],
        &["--family", "general", "--r", "6", "--variant", "B"],
        &["--family", "general", "--r", "6", "--variant", "Bprime"],
        &["--family", "general", "--r", "7", "--variant", "B"],
    ];
    for (k, case) in cases.iter().enumerate() {
        let path = dir.path().join(format!("{k}.sys"));
        let mut args = vec!["construct"];
        args.extend_from_slice(case);
        args.extend_from_slice(&["--out", path.to_str().unwrap()]);
        let built = json(&augsimp(&args).stdout);
        let analyzed = json(&augsimp(&["analyze", path.to_str().unwrap()]).stdout);
        assert_eq!(built["analysis"], analyzed["report"], "{case:?}");
    }
}

#[test]
fn enumerated_analysis_matches_symbolic() {
    let dir = TempDir::new().unwrap();
    let sys = dir.path().join("r3.sys");
    augsimp(&["construct", "--family", "r3", "--out", sys.to_str().unwrap(), "--no-analysis"]);
    let symbolic = json(&augsimp(&["analyze", sys.to_str().unwrap()]).stdout);
    let explicit = json(&augsimp(&["analyze", "--enumerate", sys.to_str().unwrap()]).stdout);
    assert_eq!(symbolic["report"], explicit["report"]);
    assert_eq!(symbolic["report"]["verdict"], "simple");
}

#[test]
fn group_input_exits_1() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "cycle.txt", "3\n2 3 1\n");
    let out = augsimp(&["analyze", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stderr)["error"]["kind"], "group-input");
}

#[test]
fn malformed_input_exits_2_with_position() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.txt", "3\n1 2 3\n2 x 1\n");
    let out = augsimp(&["analyze", &f]);
    assert_eq!(out.status.code(), Some(2));
    let err = json(&out.stderr);
    assert_eq!(err["error"]["line"], 3);
    assert_eq!(err["error"]["column"], 3);
}

#[test]
fn unknown_flag_and_missing_file_exit_2() {
    assert_eq!(augsimp(&["analyze", "x.txt", "--bogus"]).status.code(), Some(2));
    assert_eq!(augsimp(&["frobnicate"]).status.code(), Some(2));
    let out = augsimp(&["analyze", "/nonexistent/file"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["error"]["kind"], "unreadable-input");
}

#[test]
fn cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t3.txt", T3);
    let out = Command::new(env!("CARGO_BIN_EXE_augsimp")).args(["analyze", &f]).env("AUGSIMP_CAP", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stderr)["error"]["kind"], "cap-exceeded");
    let out = Command::new(env!("CARGO_BIN_EXE_augsimp")).args(["analyze", &f]).env("AUGSIMP_CAP", "ten").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t3.txt", T3);
    let sys = dir.path().join("b.sys");
    let runs: [Vec<&str>; 4] = [
        vec!["analyze", &f],
        vec!["rank2", &f],
        vec!["construct", "--family", "general", "--r", "6", "--variant", "Bprime"],
        vec!["oracle", "falsify", &f, "--seed", "5"],
    ];
    for args in &runs {
        let a = augsimp(args);
        let b = augsimp(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    augsimp(&["construct", "--family", "r4", "--out", sys.to_str().unwrap()]);
    let first = std::fs::read(&sys).unwrap();
    augsimp(&["construct", "--family", "r4", "--out", sys.to_str().unwrap()]);
    assert_eq!(first, std::fs::read(&sys).unwrap());
}

#[test]
fn rank2_and_dump() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t3.txt", T3);
    let dump = dir.path().join("pprime.tsv");
    let out = augsimp(&["rank2", &f, "--dump", dump.to_str().unwrap()]);
    let doc = json(&out.stdout);
    assert_eq!(doc["rank2"]["verdict"], "simple");
    assert_eq!(doc["rank2"]["rank"], 2);
    assert!(Path::new(&dump).exists());
    let sys = dir.path().join("r3.sys");
    augsimp(&["construct", "--family", "r3", "--out", sys.to_str().unwrap()]);
    let out = augsimp(&["rank2", sys.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stderr)["error"]["kind"], "hypothesis-violation");
}

#[test]
fn oracles() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t3.txt", T3);
    assert_eq!(json(&augsimp(&["oracle", "falsify", &f]).stdout)["found"], false);
    let sys = dir.path().join("r4.sys");
    augsimp(&["construct", "--family", "r4", "--example", "nonsimple", "--out", sys.to_str().unwrap()]);
    let doc = json(&augsimp(&["oracle", "falsify", sys.to_str().unwrap()]).stdout);
    assert_eq!(doc["found"], true);
    let r3 = dir.path().join("r3.sys");
    augsimp(&["construct", "--family", "r3", "--out", r3.to_str().unwrap()]);
    let doc = json(&augsimp(&["oracle", "enumerate", r3.to_str().unwrap()]).stdout);
    assert_eq!(doc["candidates"], "90");
    assert_eq!(doc["admissible_count"], 4);
    assert_eq!(doc["file_partitions_admissible"], true);
}
