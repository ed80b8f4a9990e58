//! End-to-end tests of the `essmin` binary: every subcommand, exit codes,
//! error paths, and byte-level determinism.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn essmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_essmin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\nstderr:\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn torus_closure_of_4_8() {
    let out = essmin(&["torus", "closure", &fixture("point-4-8.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["gamma_u_basis"], serde_json::json!([["3", "-2"]]));
    assert_eq!(v["degree"], "3");
    assert_eq!(v["subtorus"], true);
}

#[test]
fn torus_degree_and_obstruct() {
    let out = essmin(&["torus", "degree", &fixture("point-4-8.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["degree"], "1"); // a point

    // X = (4,8) against its closure: omega = 1
    let out = essmin(&["torus", "obstruct", &fixture("point-4-8.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["omega"], "1");
    assert_eq!(v["deg_y"], "3");
}

#[test]
fn obstruct_self_exits_2_with_null_omega() {
    let out = essmin(&["torus", "obstruct", &fixture("self-obstruct.json")]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert!(v["omega"].is_null());
    assert_eq!(v["infinite"], true);
}

#[test]
fn bound_thm13_worked_example() {
    let out = essmin(&["bound", "thm13", &fixture("point-4-8.json"), "--m-k", "log2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let report = &v["report"];
    assert_eq!(report["deg_u"], "3");
    assert_eq!(report["omega"], "1");
    let sharp = &report["bounds"][0];
    let decimal = sharp["value"]["decimal"].as_str().unwrap();
    assert!(decimal.starts_with("0.9802581434"), "got {decimal}");
    assert_eq!(sharp["holds_for_point"], true);
    assert_eq!(report["point_height"]["exact"], "log(8)");
    // monomial form present and certified
    let mono = report["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["name"] == "monomial_bound")
        .expect("monomial bound reported");
    assert!(mono["value"]["decimal"].as_str().unwrap().starts_with("1.66611846"));
    assert_eq!(mono["holds_for_point"], true);
}

#[test]
fn bound_cor15_and_torsion_exit() {
    let out = essmin(&["bound", "cor15", &fixture("rational-point.json"), "--m-k", "log2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let printed = &v["report"]["bounds"][0];
    assert!(printed["value"]["decimal"].as_str().unwrap().starts_with("0.1299650963"));

    // torsion point: bound zero, exit 2
    let tmp = std::env::temp_dir().join("essmin-torsion-point.json");
    std::fs::write(&tmp, r#"{"kind":"point","coordinates":["-1","1"]}"#).unwrap();
    let out = essmin(&["bound", "thm13", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["torsion_variety"], true);
}

#[test]
fn height_commands() {
    let out = essmin(&["height", "mahler", &fixture("golden.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["height"]["decimal"].as_str().unwrap().starts_with("0.2406059125"));
    assert_eq!(v["is_root_of_unity"], false);

    let out = essmin(&["height", "point", &fixture("rational-point.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["exact"], "log(8)");
    assert!(v["height"]["decimal"].as_str().unwrap().starts_with("2.0794415416"));
}

#[test]
fn ff_commands() {
    let out = essmin(&["ff", "height", &fixture("ff-cusp.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["height"], 3);

    let out = essmin(&["ff", "closure", &fixture("ff-cusp.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["gamma_u_basis"], serde_json::json!([["3", "-2"]]));
    assert_eq!(v["degree"], "3");
    assert_eq!(v["defined_over_k"], false);

    let out = essmin(&["ff", "verify", &fixture("ff-cusp.json"), "--samples", "10"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["holds_main_bound"], true);
    assert_eq!(v["holds_monomial_bound"], true);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["bound_sq"], "2");

    // hyperform goes through ff height
    let out = essmin(&["ff", "height", &fixture("hyperform.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["height"], 1);
    assert_eq!(v["degree"], 2);
}

#[test]
fn vacuous_ff_verify_exits_2() {
    let tmp = std::env::temp_dir().join("essmin-constant-ff.json");
    std::fs::write(
        &tmp,
        r#"{"kind":"ff-point","coordinates":[{"num":["5"],"den":["1"]}]}"#,
    )
    .unwrap();
    let out = essmin(&["ff", "verify", tmp.to_str().unwrap(), "--samples", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["vacuous"], true);
}

#[test]
fn error_paths_exit_nonzero_without_stdout() {
    // malformed rational names the offending path
    let out = essmin(&["height", "point", &fixture("bad-rational.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty(), "no partial result on stdout");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("coordinates[0]"), "missing path in: {err}");
    assert!(err.contains("zero denominator"), "missing cause in: {err}");

    // unknown kind lists the allowed kinds
    let out = essmin(&["torus", "degree", &fixture("bad-kind.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown kind"));
    assert!(err.contains("torus") && err.contains("bound-query"));

    // missing file
    let out = essmin(&["torus", "degree", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["bound", "thm13", &fixture("point-4-8.json"), "--m-k", "log2"],
        vec!["ff", "verify", &fixture("ff-cusp.json"), "--samples", "12", "--seed", "9"],
        vec!["verify", "all", "--seed", "5", "--instances", "3", "--max-ambient", "3"],
    ] {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        let a = essmin(&refs);
        let b = essmin(&refs);
        assert_eq!(a.stdout, b.stdout, "nondeterministic stdout for {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn verify_all_small_run_passes() {
    let out = essmin(&["verify", "all", "--seed", "11", "--instances", "4", "--max-ambient", "3"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["total_failures"], 0);
    assert!(v["properties"].as_array().unwrap().len() >= 25);
}
