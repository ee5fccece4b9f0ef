use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn twistlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlab")).args(args).output().expect("binary runs")
}

fn twistlab_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_twistlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn twist_of_generator_reaches_degree_minus_one() {
    let out = twistlab(&["--diagram", "A2", "twist", "s1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let degrees: Vec<&String> = v["complex"]["degrees"].as_object().unwrap().keys().collect();
    assert_eq!(degrees, ["-1", "0"]);
}

#[test]
fn twist_by_identity_is_lambda() {
    let out = twistlab(&["--diagram", "A2", "twist", "e"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["complex"]["degrees"], serde_json::json!({"0": [1, 2]}));
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(code(&twistlab(&["--diagram", "A2", "twist", "s1x"])), 2);
    assert_eq!(code(&twistlab(&["--diagram", "A2", "twist", "s3"])), 2);
    assert_eq!(code(&twistlab(&["--diagram", "B2", "twist", "s1"])), 2);
}

#[test]
fn recover_round_trip() {
    let out = twistlab(&["--diagram", "A2", "recover", "s1s2s1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["word"].as_array().unwrap().len(), 3);
    assert_eq!(v["peels"][0]["min_degree"], -2);

    let out = twistlab(&["--diagram", "A2", "recover", "--object", "lambda"]);
    assert_eq!(json(&out)["word"], serde_json::json!([]));
}

#[test]
fn recover_reads_twist_output() {
    let t = twistlab(&["--diagram", "D4", "twist", "s2s1s3s4s2"]);
    let out = twistlab_stdin(&["--diagram", "D4", "recover", "--object", "-"], &String::from_utf8(t.stdout).unwrap());
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verified"], true);
}

#[test]
fn non_image_exits_1() {
    let out = twistlab(&["--diagram", "A2", "recover", "--object", "P1[1]"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a twist image"));
    let out = twistlab_stdin(&["--diagram", "A3", "recover"], r#"{"degrees":{"0":[1,2]},"diffs":{}}"#);
    assert_eq!(code(&out), 1);
}

#[test]
fn braid_equality_verdicts() {
    let out = twistlab(&["--diagram", "A2", "braid-eq", "s1s2s1", "s2s1s2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!((v["equal"].clone(), v["agree"].clone()), (true.into(), true.into()));

    let out = twistlab(&["--diagram", "A2", "braid-eq", "s1", "s2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["agree"], true);

    assert_eq!(code(&twistlab(&["--diagram", "A3", "braid-eq", "s1s3", "s3s1"])), 0);
    assert_eq!(code(&twistlab(&["--diagram", "A3", "--field", "q", "braid-eq", "--mode", "category", "s1s2", "s2s1"])), 1);
}

#[test]
fn mesh_solve_examples() {
    let out = twistlab(&["--diagram", "A2", "mesh-solve", "s1s2s1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["divisor"], 2);
    assert_eq!(v["verified"], true);
    assert_eq!(v["replayed"], true);

    let out = twistlab(&["--diagram", "D4'", "mesh-solve", "2 1 3 4 2 1 3 4 2 4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_ne!(v["divisor"], 2);
    assert_eq!(v["verified"], true);

    let out = twistlab(&["--diagram", "A2", "mesh-solve", "s1s2s1", "--format", "dot"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("digraph"));
}

#[test]
fn inconsistent_theta_exits_2() {
    let set = r#"{"vertices":[[0,1],[1,2],[2,1]],"theta":{"0,1":1,"1,2":1,"2,1":1},"boundary":{"1":-1,"2":0}}"#;
    let out = twistlab_stdin(&["--diagram", "A2", "mesh-solve", "--set", "-"], set);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mesh relations"));

    let good = r#"{"vertices":[[0,1],[1,2],[2,1]],"theta":{"0,1":1,"1,2":1,"2,1":0},"boundary":{"1":-1,"2":0}}"#;
    let out = twistlab_stdin(&["--diagram", "A2", "mesh-solve", "--set", "-"], good);
    assert_eq!(json(&out)["divisor"], 2);
}

#[test]
fn selftest_passes_and_catches_corruption() {
    let out = twistlab(&["--diagram", "A2", "--max-len", "6", "selftest", "--format", "text"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 9);

    let out = twistlab(&["--diagram", "A2", "--max-len", "3", "selftest", "--corrupt-table"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["passed"], false);
    let c1 = &v["criteria"][0];
    assert!(c1["failures"].as_u64().unwrap() > 0);
    assert!(c1["examples"][0].as_str().unwrap().contains("trace pairing"));
}

#[test]
fn sweep_is_reproducible() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_twistlab"))
            .args(["--diagram", "A3", "--jobs", "2", "sweep", "--samples", "30"])
            .env("TWISTLAB_SEED", seed)
            .output()
            .unwrap()
    };
    let a = run("11");
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run("11").stdout);
    assert_eq!(json(&a)["failures"], serde_json::json!([]));
    assert_eq!(code(&run("eleven")), 2);
}
