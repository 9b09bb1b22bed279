use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn polyadic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyadic")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn builtin_validates() {
    let out = polyadic(&["validate", "--builtin", "der3_b1_z2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("check associativity: PASS (full, 96 checked)"));
    assert!(text.contains("skew: 0->1 1->0"));
    assert!(text.contains("n-ary identity: none"));
    assert!(text.ends_with("result: PASS\n"));
}

#[test]
fn malformed_document_exits_2_with_position() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "bad.json", "{\"kind\": \"cayley\",\n \"order\": 2,\n \"table\": [[0,1],[1,0]\n");
    let out = polyadic(&["validate", &path]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn unknown_kind_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "odd.json", r#"{"kind":"monoid","order":1}"#);
    assert_eq!(code(&polyadic(&["validate", &path])), 2);
}

#[test]
fn out_of_range_entries_exit_2() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "range.json", r#"{"kind":"cayley","order":2,"table":[[0,1],[1,2]]}"#);
    assert_eq!(code(&polyadic(&["validate", &path])), 2);
    let path = write(&dir, "short.json", r#"{"kind":"nary_table","arity":3,"order":2,"table":[0,1,1,0]}"#);
    assert_eq!(code(&polyadic(&["validate", &path])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&polyadic(&["validate"])), 2);
    assert_eq!(code(&polyadic(&["validate", "--builtin", "no_such_group"])), 2);
    assert_eq!(code(&polyadic(&["cover", "--builtin", "z2", "--anchor", "5"])), 2);
    assert_eq!(code(&polyadic(&["frobnicate"])), 2);
    assert_eq!(code(&polyadic(&["validate", "/nonexistent/spec.json"])), 2);
}

#[test]
fn corrupted_table_exits_1_with_witness() {
    let g = polyadic::b_derived(&polyadic::cyclic_group(2), 1, 3).unwrap();
    let mut table = g.to_table();
    table[3] ^= 1;
    let doc = serde_json::json!({ "kind": "nary_table", "arity": 3, "order": 2, "table": table });
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "corrupt.json", &doc.to_string());
    let out = polyadic(&["validate", &path]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"));
    assert!(text.contains("witness:"));
}

#[test]
fn non_group_cayley_exits_1() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "magma.json", r#"{"kind":"cayley","order":2,"table":[[0,0],[0,0]]}"#);
    assert_eq!(code(&polyadic(&["validate", &path])), 1);
    assert_eq!(code(&polyadic(&["cover", &path])), 1);
}

#[test]
fn non_central_b_exits_1() {
    let dir = TempDir::new().unwrap();
    let s3 = polyadic::symmetric_group(3).unwrap();
    let doc = serde_json::json!({
        "kind": "b_derived",
        "base": { "kind": "cayley", "order": 6, "table": s3.table() },
        "b": 1,
        "arity": 3,
    });
    let path = write(&dir, "noncentral.json", &doc.to_string());
    assert_eq!(code(&polyadic(&["validate", &path])), 1);
}

#[test]
fn file_kinds_agree_with_builtins() {
    let dir = TempDir::new().unwrap();
    let nested = write(
        &dir,
        "nested.json",
        r#"{"kind":"b_derived","base":{"kind":"cayley","order":2,"table":[[0,1],[1,0]],"label":"Z2"},"b":1,"arity":3}"#,
    );
    let flat = write(&dir, "flat.json", r#"{"kind":"nary_table","arity":3,"order":2,"table":[1,0,0,1,0,1,1,0]}"#);
    let via_builtin = write(&dir, "builtin.json", r#"{"kind":"builtin","name":"der3_b1_z2"}"#);
    for path in [&nested, &flat, &via_builtin] {
        let out = polyadic(&["cover", path, "--anchor", "0"]);
        assert_eq!(code(&out), 0, "{path}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("cover order: 4"));
        assert!(text.contains("quotient: Z2"));
        assert!(text.contains("cover type: cyclic, exponent 4, element orders 1 2 4 4"));
    }
}

#[test]
fn all_anchors_finds_isomorphisms() {
    let out = polyadic(&["cover", "--builtin", "der3_b1_z2", "--all-anchors"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("anchor 0 (skew 1):"));
    assert!(text.contains("anchor 1 (skew 0):"));
    assert!(text.contains("check anchor-isomorphism 0~1: PASS"));
}

#[test]
fn binary_cover_is_noted() {
    let out = polyadic(&["cover", "--builtin", "s3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("note: n = 2"));
    assert!(text.contains("check binary-cover a=0: PASS"));
}

#[test]
fn dump_writes_cover_table() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cover.json");
    let out = polyadic(&["cover", "--builtin", "der3_b1_z2", "--dump", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let cover = &doc["covers"][0];
    assert_eq!(cover["order"], 4);
    assert_eq!(cover["identity"], serde_json::json!([1, 1]));
    let table: Vec<Vec<usize>> = serde_json::from_value(cover["table"].clone()).unwrap();
    assert!(polyadic::group::group_from_table(&table, "dump").is_ok());
}

#[test]
fn chartab_der3_z2_has_four_linear_characters() {
    let out = polyadic(&["chartab", "--builtin", "der3_z2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("degrees: 1 1 1 1\n"));
    assert!(!text.contains("i "), "Z2 x Z2 has real characters");
}

#[test]
fn chartab_der3_s3_degrees() {
    let out = polyadic(&["chartab", "--builtin", "der3_s3"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("degrees: 1 1 1 1 2 2\n"));
}

#[test]
fn chartab_text_ignores_seed() {
    for g in ["der3_s3", "der3_b2_z4", "der4_z3"] {
        let a = polyadic(&["chartab", "--builtin", g, "--seed", "1"]);
        let b = polyadic(&["chartab", "--builtin", g, "--seed", "123456789"]);
        assert_eq!(a.stdout, b.stdout, "{g}");
    }
}

#[test]
fn no_negative_zero_in_text() {
    for g in ["der3_s3", "der3_b1_z2", "der4_b1_z3"] {
        for verb in ["chartab", "verify-theorems"] {
            let out = polyadic(&[verb, "--builtin", g]);
            assert!(!String::from_utf8(out.stdout).unwrap().contains("-0.000000"), "{verb} {g}");
        }
    }
}

#[test]
fn verify_theorems_reports() {
    let out = polyadic(&["verify-theorems", "--builtin", "der4_z3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sum of squares 9, (n-1)|G| = 3 * 3 = 9"));

    let out = polyadic(&["verify-theorems", "--builtin", "der3_b1_z2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("inapplicable (empty kernel): chi1 chi2 chi3"));
    assert!(text.contains("check orthogonality: PASS (1 pairs"));
}

#[test]
fn json_output_is_parseable() {
    let out = polyadic(&["verify-theorems", "--builtin", "der3_s3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    assert!(doc["elapsed_ms"].is_u64());
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true));

    let out = polyadic(&["chartab", "--builtin", "der3_b1_z2", "--format", "json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["degrees"], serde_json::json!([1, 1, 1, 1]));
    assert_eq!(doc["polyadic_characters"][0]["kernel"], serde_json::json!([0, 1]));
}

#[test]
fn sampled_mode_is_reported() {
    let out = polyadic(&["validate", "--builtin", "der3_s3", "--sample", "500", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("sampled 500, seed 7"));
    assert_eq!(code(&polyadic(&["validate", "--builtin", "z2", "--sample", "0"])), 2);
}

#[test]
fn catalog_lists_required_builtins() {
    let out = polyadic(&["catalog"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["trivial", "z2", "z4", "s3", "der3_z2", "der3_b1_z2", "der3_s3", "der4_z3", "der3_b2_z4"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name}");
    }
}
