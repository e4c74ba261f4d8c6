//! End-to-end tests of the `oddset` binary: exit codes, JSON output, and
//! one-line diagnostics.

use std::path::Path;
use std::process::{Command, Output};

fn oddset(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_oddset"));
    cmd.args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    oddset(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write_doc(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn construct_dimension_one_emits_the_base_case() {
    let out = run(&["construct", "-n", "1"]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    assert_eq!(value["size"], 2);
    assert_eq!(value["verdict"], true);
    assert_eq!(
        value["set"]["points"],
        serde_json::json!([["0"], ["1"]])
    );
}

#[test]
fn construct_dimension_two_is_canonical() {
    let out = run(&["construct", "-n", "2"]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    assert_eq!(
        value["set"]["points"],
        serde_json::json!([["3/2", "1/2"], ["1", "1"], ["3", "2"], ["5/2", "5/2"]])
    );
}

#[test]
fn construct_verify_round_trip_across_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    for n in 1..=6u32 {
        let path = dir.path().join(format!("set{n}.json"));
        let path = path.to_str().unwrap();
        let built = run(&["construct", "-n", &n.to_string(), "-o", path]);
        assert_eq!(exit_code(&built), 0, "construct -n {n}");
        assert_eq!(stdout_json(&built)["size"], 1u64 << n);

        let verified = run(&["verify", path]);
        assert_eq!(exit_code(&verified), 0, "verify of construct -n {n}");
        assert_eq!(stdout_json(&verified)["verdict"], true);

        let audited = run(&["audit", path]);
        assert_eq!(exit_code(&audited), 0, "audit of construct -n {n}");
    }
}

#[test]
fn verify_failure_names_the_pair_one_based() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        dir.path(),
        "bad.json",
        r#"{"dim":1,"points":[["0"],["1"],["2"]]}"#,
    );
    let out = run(&["verify", &path]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["verdict"], false);
    let diag = stderr_text(&out);
    assert_eq!(diag.lines().count(), 1, "diagnostic is one line: {diag}");
    assert!(diag.contains("pair (1, 3)"), "diagnostic: {diag}");
    assert!(diag.contains("distance 2"), "diagnostic: {diag}");
    assert!(!diag.contains("panicked"), "diagnostic: {diag}");
}

#[test]
fn verify_rejects_malformed_documents_operationally() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "dup.json", r#"{"dim":1,"points":[["1"],["1"]]}"#);
    let out = run(&["verify", &path]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("points 1 and 2 are identical"));

    let out = run(&["verify", "/nonexistent/points.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn audit_flags_non_uniform_parity_and_oversized_fibers() {
    let dir = tempfile::tempdir().unwrap();
    let mixed = write_doc(
        dir.path(),
        "mixed.json",
        r#"{"dim":2,"points":[["0","0"],["1/2","0"]]}"#,
    );
    let out = run(&["audit", &mixed]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["uniform_weight_parity"], false);
    assert!(stderr_text(&out).contains("point 2"), "diag: {}", stderr_text(&out));

    let crowded = write_doc(
        dir.path(),
        "crowded.json",
        r#"{"dim":2,"points":[["0","0"],["2","0"],["0","2"]]}"#,
    );
    let out = run(&["audit", &crowded]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["fibers_within_two"], false);
    let diag = stderr_text(&out);
    assert!(diag.contains("fingerprint 00"), "diag: {diag}");
    assert!(diag.contains("3 points"), "diag: {diag}");
}

#[test]
fn search_finds_the_half_integer_square_maximum() {
    let out = run(&["search", "-n", "2", "--lattice", "half", "--lo", "0", "--hi", "3"]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    assert_eq!(value["max_size"], 4);
    assert_eq!(value["cap"], 4);
    assert_eq!(value["violation"], false);
    assert_eq!(value["lattice"], "half-integer");
    assert_eq!(value["witness"]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn search_integer_lattice_tops_out_at_two() {
    let out = run(&["search", "-n", "1", "--lattice", "int", "--lo", "0", "--hi", "6"]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    assert_eq!(value["max_size"], 2);
    assert_eq!(value["cap"], 2);
    assert_eq!(value["violation"], false);
}

#[test]
fn search_accepts_rational_bounds_and_thread_count() {
    let out = run(&[
        "search", "-n", "1", "--lattice", "half", "--lo", "1/2", "--hi", "7/2",
        "--threads", "2",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_json(&out)["max_size"], 2);
}

#[test]
fn search_vertex_limit_env_override() {
    let mut cmd = oddset(&["search", "-n", "2", "--lattice", "half", "--lo", "0", "--hi", "3"]);
    cmd.env("ODDSET_VERTEX_LIMIT", "3");
    let out = cmd.output().unwrap();
    assert_eq!(exit_code(&out), 2);
    let diag = stderr_text(&out);
    assert!(diag.contains("49"), "diag names the count: {diag}");
    assert!(diag.contains("3"), "diag names the limit: {diag}");

    let mut cmd = oddset(&["search", "-n", "2", "--lattice", "half", "--lo", "0", "--hi", "3"]);
    cmd.env("ODDSET_VERTEX_LIMIT", "49");
    assert_eq!(exit_code(&cmd.output().unwrap()), 0);

    let mut cmd = oddset(&["search", "-n", "1", "--lattice", "int", "--lo", "0", "--hi", "1"]);
    cmd.env("ODDSET_VERTEX_LIMIT", "banana");
    let out = cmd.output().unwrap();
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn search_rejects_unusable_boxes() {
    let out = run(&["search", "-n", "1", "--lattice", "int", "--lo", "1/2", "--hi", "3"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("integer lattice"));

    let out = run(&["search", "-n", "1", "--lattice", "half", "--lo", "3", "--hi", "1"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("inverted"));
}

#[test]
fn rationalize_snaps_decimals_to_exact_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(
        dir.path(),
        "in.json",
        r#"{"dim":1,"points":[["0.0"],["3.00000001"]]}"#,
    );
    let output = dir.path().join("out.json");
    let output = output.to_str().unwrap();
    let out = run(&["rationalize", &input, "-o", output]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    assert_eq!(value["points"].as_array().unwrap().len(), 2);
    assert!(value["provenance"]["epsilon"].is_string());

    let verified = run(&["verify", output]);
    assert_eq!(exit_code(&verified), 0, "rationalized output verifies");
}

#[test]
fn rationalize_declared_distances_rescue_coarse_proxies() {
    let dir = tempfile::tempdir().unwrap();
    let undeclared = write_doc(
        dir.path(),
        "coarse.json",
        r#"{"dim":1,"points":[["0.0"],["4.4"]]}"#,
    );
    let out = run(&["rationalize", &undeclared]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_text(&out).contains("pair (1, 2)"));

    let declared = write_doc(
        dir.path(),
        "declared.json",
        r#"{"dim":1,"points":[["0.0"],["4.9"]],"distances":[[0,1,5]]}"#,
    );
    let output = dir.path().join("out.json");
    let output = output.to_str().unwrap();
    let out = run(&["rationalize", &declared, "-o", output]);
    assert_eq!(exit_code(&out), 0, "diag: {}", stderr_text(&out));

    let verified = run(&["verify", output]);
    assert_eq!(exit_code(&verified), 0);
    // Separation shifted the declared 5 by the even rank gap 2.
    let cert = stdout_json(&verified);
    assert_eq!(cert["pair_results"][0]["distance"], "7");
}

#[test]
fn rationalize_rejects_even_declared_distances() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        dir.path(),
        "even.json",
        r#"{"dim":1,"points":[["0.0"],["4.0"]],"distances":[[0,1,4]]}"#,
    );
    let out = run(&["rationalize", &path]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("not odd"));
}

#[test]
fn dyadic_clears_odd_denominators_and_reports_the_scale() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        dir.path(),
        "thirds.json",
        r#"{"dim":2,"points":[["11/6","9/14"],["4/3","8/7"],["10/3","15/7"],["17/6","37/14"]]}"#,
    );
    let output = dir.path().join("out.json");
    let output = output.to_str().unwrap();
    let out = run(&["dyadic", &path, "-o", output]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_json(&out)["provenance"]["scale"], 21);

    let verified = run(&["verify", output]);
    assert_eq!(exit_code(&verified), 0, "scaled output verifies");
}

#[test]
fn dyadic_rejects_sets_with_non_odd_distances() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "even.json", r#"{"dim":1,"points":[["0"],["2"]]}"#);
    let out = run(&["dyadic", &path]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_text(&out).contains("pair (1, 2)"));
}

#[test]
fn pretty_output_is_text_not_json() {
    let out = run(&["construct", "-n", "2", "--pretty"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!text.trim_start().starts_with('{'), "pretty is not JSON: {text}");
    assert!(text.contains("(3/2, 1/2)"), "pretty lists points: {text}");
}

#[test]
fn unknown_flags_and_verbs_are_rejected() {
    assert_eq!(exit_code(&run(&["construct", "-n", "2", "--frobnicate"])), 2);
    assert_eq!(exit_code(&run(&["frobnicate"])), 2);
    assert_eq!(exit_code(&run(&[])), 2);
}
