use relpres::diagrams::fixtures::mirror_pair;
use relpres::words::{parse_relative_word, Alphabet};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn relpres(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_relpres")).args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (code, v)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_reports_envelope_and_unimodularity() {
    let (code, v) = relpres(&["classify", path(&fixture("gtg.job")), "--seed", "17"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["seed"], 17);
    assert_eq!(v["limits"]["kb_rules"], 5000);
    assert_eq!(v["result"]["generalised_unimodular"], "YES");
    assert_eq!(v["result"]["complexity_le_one"], true);
    assert_eq!(v["result"]["exponent_sums"], serde_json::json!([1]));
}

#[test]
fn decompose_finds_two_syllables() {
    let (code, v) = relpres(&["decompose", path(&fixture("two_syllables.job"))]);
    assert_eq!(code, 0, "{v}");
    let text = v["result"].to_string();
    assert!(text.contains("\"p\":2"), "{text}");
}

#[test]
fn torus_is_rejected_as_malformed() {
    let (code, v) = relpres(&["diagram", "check", path(&fixture("torus.json"))]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "MALFORMED");
    assert!(v["error"]["message"].as_str().unwrap().contains("Euler"));
    assert!(v.get("result").is_none());
}

#[test]
fn mirror_pair_is_reducible() {
    let alphabet = Alphabet { coefficients: vec!["a".into(), "b".into()], variables: vec!["t".into()] };
    let w = parse_relative_word("a t b t^-1 a t", &alphabet).unwrap();
    let file = scratch("mirror_pair.json");
    std::fs::write(&file, serde_json::to_string(&mirror_pair(&w, &alphabet)).unwrap()).unwrap();

    let (code, v) = relpres(&["diagram", "check", path(&file)]);
    assert_eq!(code, 0, "{v}");
    assert!(v["result"]["map"].is_object());

    let (code, v) = relpres(&["diagram", "check", path(&file), "--presentation", path(&fixture("mirror.job"))]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["is_diagram"], "YES");
    assert_eq!(v["result"]["reducible_pairs"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["reduced"], "NO");
}

#[test]
fn braid_relator_is_the_one_relator_case() {
    let (code, v) = relpres(&["centre", path(&fixture("braid.job"))]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"]["kind"], "ONE_RELATOR_CENTRE_CASE");
    assert_eq!(v["result"]["braid"]["centre"], "g t g t g t");
}

#[test]
fn single_syllable_over_free_t_gives_an_amalgam_centre() {
    let (code, v) = relpres(&["centre", path(&fixture("single_syllable.job"))]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["verdict"]["kind"], "AFP_CENTRE");
    assert_eq!(v["result"]["applicable_cases"], serde_json::json!(["CASE2"]));
}

#[test]
fn missing_torsion_flag_is_an_error() {
    let (code, v) = relpres(&["centre", path(&fixture("no_torsion_flag.job"))]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "HYPOTHESIS_UNVERIFIED");
}

#[test]
fn undecided_centre_exits_two() {
    let (code, v) = relpres(&["centre", path(&fixture("undecided.job"))]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["verdict"]["kind"], "UNKNOWN");
    assert_eq!(v["result"]["provenance"], "UNKNOWN");
}

#[test]
fn parse_errors_point_at_the_token() {
    let (code, v) = relpres(&["classify", path(&fixture("bad_word.job"))]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "PARSE");
    assert!(v["error"]["message"].as_str().unwrap().starts_with("line 2, column 10:"), "{v}");
}

#[test]
fn missing_file_is_an_io_error() {
    let (code, v) = relpres(&["centre", path(&scratch("does_not_exist.job"))]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "IO");
}

#[test]
fn output_file_is_deterministic() {
    let (a, b) = (scratch("verify_a.json"), scratch("verify_b.json"));
    for out in [&a, &b] {
        let status = Command::new(env!("CARGO_BIN_EXE_relpres"))
            .args(["products", "verify", "--asp-samples", "6", "--seed", "5", "--output", path(out)])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let (a, b) = (std::fs::read_to_string(a).unwrap(), std::fs::read_to_string(b).unwrap());
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["result"]["asp"]["status"], "EXACT");
}

#[test]
fn family_file_passes_the_combinatorial_check() {
    let (code, v) = relpres(&["products", "verify", path(&fixture("family.json")), "--depth", "3"]);
    assert!(code == 0 || code == 2, "{v}");
    assert_eq!(v["result"]["family"]["combinatorial"]["holds"], true);
    assert_eq!(v["limits"]["depth"], 3);
}

#[test]
fn verify_without_inputs_is_an_error() {
    let (code, v) = relpres(&["products", "verify"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "ERROR");
}

#[test]
fn selftest_single_criterion() {
    let (code, v) = relpres(&["selftest", "--criterion", "9"]);
    assert_eq!(code, 0, "{v}");
    let rows = v["result"]["criteria"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["passed"], true);
}

#[test]
fn bad_flags_exit_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_relpres")).args(["classify", "--depth", "0", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
