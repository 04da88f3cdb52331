//! End-to-end runs of the installed binary: exit codes, exact stdout bytes,
//! byte-stable reruns, and the JSON documents written behind --out.

use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use serde_json::{json, Value};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symlift"));
    cmd.args(args).env_remove("SYMLIFT_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd
        .stdin(if stdin.is_some() {
            Stdio::piped()
        } else {
            Stdio::null()
        })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        use std::io::Write as _;
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().expect("process exited by signal"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_with(args, None, &[])
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn write_tmp(name: &str, contents: &str) -> String {
    let path = tmp(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

/// Two scalar strands crossing at the middle node of a 21-node path.
fn crossing_region_json() -> String {
    let samples: Vec<Value> = (0..21)
        .map(|k| {
            let t = (k as f64 - 10.0) / 10.0;
            json!({"index": [k], "points": [[t], [-t]]})
        })
        .collect();
    json!({
        "version": 1, "mode": "sp", "m": 2, "n": 1, "shape": [21],
        "eps": 0.0, "domain": {"kind": "euclidean", "dim": 1},
        "samples": samples,
    })
    .to_string()
}

/// An antipodal pair on a 2x2 grid whose fourth edge jumps far enough to
/// swap the strands, so the square cannot close up.
fn braid_region_json() -> String {
    let angles = [((0, 0), 0.0), ((0, 1), 0.58), ((1, 0), 1.74), ((1, 1), 1.16)];
    let samples: Vec<Value> = angles
        .iter()
        .map(|&((i, j), a): &((u32, u32), f64)| {
            let (s, c) = a.sin_cos();
            json!({"index": [i, j], "points": [[c, s], [-c, -s]]})
        })
        .collect();
    json!({
        "version": 1, "mode": "sp", "m": 2, "n": 2, "shape": [2, 2],
        "eps": 0.0, "domain": {"kind": "euclidean", "dim": 2},
        "samples": samples,
    })
    .to_string()
}

const CROSSING_STDOUT: &str = "\
nodes: 21
segments: 3
events: 2
passing nodes: 1
max step displacement: 0.20000000000000018
round trip residual: 0
tie breaks: 1
round-trip: pass
continuity: pass
lift: ok
";

#[test]
fn partitions_text_output() {
    let r = run(&["partitions", "4"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "\
m = 4
p(m) = 5
M = 4
class 0: 4 parts, 1 member
  1^4
class 1: 3 parts, 1 member
  1^2 2
class 2: 2 parts, 2 members
  2^2
  1 3
class 3: 1 parts, 1 member
  4
"
    );
}

#[test]
fn partitions_json_document() {
    let r = run(&["partitions", "4", "--json"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["kind"], "partitions");
    assert_eq!(v["m"], 4);
    assert_eq!(v["p"], 5);
    assert_eq!(v["class_count"], 4);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 4);
    let sizes: usize = classes
        .iter()
        .map(|c| c["size"].as_u64().unwrap() as usize)
        .sum();
    assert_eq!(sizes, 5);
    assert_eq!(classes[2]["members"], json!([[2, 2], [1, 3]]));
    assert_eq!(classes[3]["members"], json!([[4]]));
}

#[test]
fn partitions_rejects_zero() {
    let r = run(&["partitions", "0"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.starts_with("error:"));
    assert!(r.stdout.is_empty());
}

#[test]
fn count_discrete_bases() {
    let r = run(&["count", "3", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "\
q = 3, m = 2
|X^m| = 9
pieces: 2
  [[0,1]]: 3
  [[0],[1]]: 6
piece-total: pass (piece counts sum to 9, product has 9)
sp-cardinality: pass (formula 6, enumeration 6)
f-cardinality: pass (formula 6, enumeration 6)
count: ok
"
    );

    let r = run(&["count", "3", "3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("sp-cardinality: pass (formula 10, enumeration 10)"));
    assert!(r.stdout.contains("f-cardinality: pass (formula 7, enumeration 7)"));
    assert!(r.stdout.ends_with("count: ok\n"));

    // one-point base: every piece but the full coincidence is empty
    let r = run(&["count", "1", "5"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("pieces: 52"));
    assert!(r.stdout.contains("  [[0,1,2,3,4]]: 1"));
    assert!(r.stdout.contains("piece-total: pass (piece counts sum to 1, product has 1)"));

    assert_eq!(run(&["count", "0", "1"]).code, 3);
    assert_eq!(run(&["count", "3", "9"]).code, 3);
}

#[test]
fn count_json_document() {
    let r = run(&["count", "3", "2", "--json"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["kind"], "count");
    assert_eq!(v["product_size"], 9);
    assert_eq!(v["sp_formula"], 6);
    assert_eq!(v["f_oracle"], 6);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["verdict"] == "pass"));
}

#[test]
fn audit_all_matches_registry() {
    let out_path = tmp("audit_all.json");
    let r = run(&["audit", "all", "3", "--out", out_path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.ends_with("audit: ok\n"));
    assert!(r.stdout.contains("as registered"));
    assert!(!r.stdout.contains("UNEXPECTED"));
    // failing lemmas come with a replayable witness
    assert!(r.stdout.contains("certificate: space = "));

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["kind"], "audit");
    assert_eq!(doc["sweep_bound"], 3);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 11);
    assert!(doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["verdict"] == "pass"));
}

#[test]
fn audit_single_lemma_with_certificate() {
    let r = run(&["audit", "interior-boundary-intersection", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "\
interior-boundary-intersection: fails (expected fails, 1924 cases) as registered
  certificate: space = {}, {0,1}; sets = {0} {1}; lhs = {}, rhs = {0,1}; interior boundaries: {} != {0,1}
audit: ok
"
    );
}

#[test]
fn audit_unknown_lemma_is_bad_input() {
    let r = run(&["audit", "no-such-lemma", "3"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.starts_with("error:"));
}

#[test]
fn lift_crossing_is_byte_stable() {
    let region = write_tmp("cross_a.json", &crossing_region_json());
    let out1 = tmp("cross_lift_1.json");
    let out2 = tmp("cross_lift_2.json");

    let r1 = run(&["lift", &region, "--out", out1.to_str().unwrap()]);
    assert_eq!(r1.code, 0, "stderr: {}", r1.stderr);
    assert_eq!(r1.stdout, CROSSING_STDOUT);

    let r2 = run_with(
        &["lift", &region, "--out", out2.to_str().unwrap()],
        None,
        &[("SYMLIFT_THREADS", "1")],
    );
    assert_eq!(r2.code, 0);
    assert_eq!(r2.stdout, r1.stdout);
    assert_eq!(
        std::fs::read(&out1).unwrap(),
        std::fs::read(&out2).unwrap(),
        "lift documents must not depend on thread count"
    );

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out1).unwrap()).unwrap();
    assert_eq!(doc["kind"], "lift");
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["tuples"].as_array().unwrap().len(), 21);
    // strands enter on opposite sides and leave swapped
    assert_eq!(doc["tuples"][0], json!([[-1.0], [1.0]]));
    assert_eq!(doc["tuples"][20], json!([[1.0], [-1.0]]));
    assert_eq!(doc["passing_nodes"], json!([10]));
}

#[test]
fn lift_reads_region_from_stdin() {
    let text = crossing_region_json();
    let r = run_with(&["lift", "-"], Some(&text), &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, CROSSING_STDOUT);
}

#[test]
fn eps_override_below_sample_spacing_changes_nothing() {
    let region = write_tmp("cross_eps.json", &crossing_region_json());
    let base = run(&["lift", &region]);
    let eps = run(&["lift", &region, "--eps", "0.05"]);
    assert_eq!(eps.code, 0);
    assert_eq!(eps.stdout, base.stdout);
}

#[test]
fn verify_round_trip_and_mutation() {
    let region = write_tmp("cross_v.json", &crossing_region_json());
    let lift_path = tmp("cross_v_lift.json");
    assert_eq!(
        run(&["lift", &region, "--out", lift_path.to_str().unwrap()]).code,
        0
    );

    let r = run(&["verify", &region, lift_path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "round-trip: pass\ncontinuity: pass\nverify: pass\n");

    // a disturbed tuple no longer reproduces its node's sample
    let mut doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&lift_path).unwrap()).unwrap();
    doc["tuples"][5][0][0] = json!(9.9);
    let bad = write_tmp("cross_v_bad.json", &doc.to_string());
    let r = run(&["verify", &region, &bad]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("round-trip: fail"));
    assert!(r.stdout.ends_with("verify: fail\n"));

    // truncated document
    let text = std::fs::read_to_string(&lift_path).unwrap();
    let cut = write_tmp("cross_v_cut.json", &text[..text.len() / 2]);
    assert_eq!(run(&["verify", &region, &cut]).code, 3);
}

#[test]
fn verify_rejects_two_stdin_sources() {
    let r = run(&["verify", "-", "-"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("standard input"));
}

#[test]
fn verify_rejects_mismatched_region() {
    let cross = write_tmp("mix_cross.json", &crossing_region_json());
    let braid = write_tmp("mix_braid.json", &braid_region_json());
    let lift_path = tmp("mix_lift.json");
    assert_eq!(
        run(&["lift", &cross, "--out", lift_path.to_str().unwrap()]).code,
        0
    );
    let r = run(&["verify", &braid, lift_path.to_str().unwrap()]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.starts_with("error:"));
}

#[test]
fn lift_rejects_non_region_documents() {
    let region = write_tmp("doc_cross.json", &crossing_region_json());
    let lift_path = tmp("doc_lift.json");
    assert_eq!(
        run(&["lift", &region, "--out", lift_path.to_str().unwrap()]).code,
        0
    );
    // a lift document is not a region file
    let r = run(&["lift", lift_path.to_str().unwrap()]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("unknown field"));

    let cut = write_tmp("doc_cut.json", &crossing_region_json()[..40]);
    let r = run(&["lift", &cut]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("region file"));

    assert_eq!(run(&["lift", "no_such_file.json"]).code, 3);
}

#[test]
fn obstructed_square_reports_holonomy() {
    let region = write_tmp("braid_a.json", &braid_region_json());
    let out = tmp("braid_report.json");
    let r = run(&["lift", &region, "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert_eq!(r.stdout, "lift: obstructed\n");
    assert!(r.stderr.contains("holonomy violation"));

    let r2 = run(&["lift", &region]);
    assert_eq!(r2.stderr, r.stderr, "obstruction report must be stable");

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["status"], "obstructed");
    assert!(doc.get("tuples").is_none());
    assert_eq!(doc["checks"][0]["verdict"], "fail");
    assert!(doc["checks"][0]["detail"]
        .as_str()
        .unwrap()
        .contains("holonomy"));
}

#[test]
fn help_version_and_arg_errors() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("symlift"));
    assert_eq!(run(&["--version"]).code, 0);
    assert_eq!(run(&[]).code, 3);
    assert_eq!(run(&["frobnicate"]).code, 3);
    assert_eq!(run(&["lift"]).code, 3);
}
