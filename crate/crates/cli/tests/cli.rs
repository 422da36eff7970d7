use std::path::PathBuf;

use assert_cmd::Command;
use predicates::prelude::*;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn hhs() -> Command {
    Command::cargo_bin("hhs").unwrap()
}

fn run_kv(args: &[&str]) -> (i32, Vec<(String, String)>) {
    let out = hhs().args(args).args(["--format", "kv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let pairs = text
        .lines()
        .map(|l| {
            let (k, v) = l.split_once(" = ").unwrap_or_else(|| panic!("not a kv line: {l}"));
            (k.to_string(), v.to_string())
        })
        .collect();
    (out.status.code().unwrap(), pairs)
}

fn get<'a>(pairs: &'a [(String, String)], key: &str) -> &'a str {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()).unwrap_or_else(|| panic!("missing key {key}"))
}

#[test]
fn validate_accepts_z2() {
    hhs().args(["validate", &fixture("z2.hhs")]).assert().code(0).stdout(predicate::str::contains("VALID (0 violations)"));
}

#[test]
fn validate_reports_exclusivity_witness() {
    hhs()
        .args(["validate", &fixture("badpair.hhs")])
        .assert()
        .code(2)
        .stdout(predicate::str::contains("INVALID (1 violations)"))
        .stdout(predicate::str::contains("[U1, U2]"));
}

#[test]
fn validate_reports_missing_container() {
    let (code, kv) = run_kv(&["validate", &fixture("nocontainer.hhs")]);
    assert_eq!(code, 2);
    assert_eq!(get(&kv, "violations"), "2");
    assert_eq!(get(&kv, "violation.0.witness"), "U");
}

#[test]
fn missing_file_is_an_input_error() {
    hhs().args(["validate", "no/such/file.hhs"]).assert().code(1).stderr(predicate::str::contains("cannot read"));
}

#[test]
fn malformed_structure_is_an_input_error() {
    let dir = std::env::temp_dir().join(format!("hhs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dangling.hhs");
    std::fs::write(&path, "DOMAINS\nS bounded\nNESTING\nU < S\n").unwrap();
    hhs().args(["validate", path.to_str().unwrap()]).assert().code(1).stdout(predicate::str::is_empty());
}

#[test]
fn usage_errors_exit_nonzero_without_a_verdict() {
    hhs().args(["crystal"]).assert().failure().stdout(predicate::str::is_empty());
    hhs().args(["model", "run", "big-set", "--model", "zn(2)", "--element", "(1,0)", "--prefix-cap", "2"]).assert().code(1);
}

#[test]
fn eyries_of_z3_are_the_three_lines() {
    let (code, kv) = run_kv(&["eyries", &fixture("z3.hhs")]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv, "eyries"), "{U1, U2, U3}");
    assert_eq!(get(&kv, "verdict"), "certified");
}

#[test]
fn eyries_failure_witness_exits_2() {
    let (code, kv) = run_kv(&["eyries", &fixture("transverse_maximal.hhs")]);
    assert_eq!(code, 2);
    assert_eq!(get(&kv, "failure"), "maximal unbounded domains U and V are transverse");
}

#[test]
fn eyries_of_invalid_structure_exit_2() {
    let (code, kv) = run_kv(&["eyries", &fixture("badpair.hhs")]);
    assert_eq!(code, 2);
    assert_eq!(get(&kv, "verdict"), "invalid-structure");
}

#[test]
fn subgroup_eyries_with_labels() {
    let (code, kv) = run_kv(&["eyries", &fixture("f2_coned.hhs"), "--labels", &fixture("f2_a.labels")]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv, "eyries"), "{<a>}");
}

#[test]
fn classify_z5_and_f2() {
    let (code, kv5) = run_kv(&["classify", &fixture("z5.hhs")]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv5, "rank"), "5");
    assert_eq!(get(&kv5, "trichotomy"), "ProductOf5(U1, U2, U3, U4, U5)");
    let (code, kvf) = run_kv(&["classify", &fixture("f2_coned.hhs")]);
    assert_eq!(code, 0);
    assert_eq!(get(&kvf, "abelian"), "NotByThisCriterion(S is not a quasiline)");
    assert_eq!(get(&kvf, "trichotomy"), "SingleEyrie(S)");
}

#[test]
fn crystal_decide_triangle_and_z2() {
    let (code, kv) = run_kv(&["crystal", "decide", &fixture("triangle333.crystal")]);
    assert_eq!(code, 2);
    assert_eq!(get(&kv, "verdict"), "NotHHG: order-3 obstruction");
    assert_eq!(get(&kv, "point_group_order"), "6");
    let (code, kv) = run_kv(&["crystal", "decide", &fixture("z2.crystal")]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv, "verdict"), "Admissible");
}

#[test]
fn wallpaper_sweep_counts_five() {
    let (code, kv) = run_kv(&["crystal", "wallpaper"]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv, "not_hhg"), "5");
    assert_eq!(get(&kv, "group.p6m.verdict"), "not-hhg");
    assert_eq!(get(&kv, "group.p4g.verdict"), "admissible");
}

#[test]
fn kv_output_is_deterministic() {
    let args = ["model", "run", "distance-formula", "--model", "free(2,5)", "--pairs", "100", "--seed", "7"];
    let a = run_kv(&args);
    let b = run_kv(&args);
    assert_eq!(a, b);
}

#[test]
fn model_export_round_trips_through_validate() {
    let out = hhs().args(["model", "export", "zn(2)"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("DOMAINS"));
    assert_eq!(text, std::fs::read_to_string(fixture("z2.hhs")).unwrap());
}

#[test]
fn distance_formula_on_zn_is_exact() {
    let (code, kv) = run_kv(&["model", "run", "distance-formula", "--model", "zn(2)"]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv, "a"), "1.0000");
    assert_eq!(get(&kv, "b"), "0.0000");
}

#[test]
fn realisation_of_a_perturbed_tuple() {
    let (code, kv) = run_kv(&["model", "run", "realisation", "--model", "zn(2)", "--point", "(3,4)", "--set", "U1=7"]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv, "point"), "(7,4)");
}

#[test]
fn passing_up_refusal_exits_1() {
    let args = ["model", "run", "passing-up", "--model", "free(2,5)", "--x", "1", "--y", "ababababab", "--c", "5"];
    let (code, kv) = run_kv(&args);
    assert_eq!(code, 1);
    assert_eq!(get(&kv, "verdict"), "refused");
}

#[test]
fn trace_transverse_completes_on_the_coned_graph() {
    let (code, kv) = run_kv(&["model", "run", "trace-transverse", "--model", "free(2,5)", "--v", "<a>", "--w", "S"]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv, "verdict"), "completed");
    assert!(get(&kv, "final_margin").parse::<f64>().unwrap() > 40.0);
}

#[test]
fn trace_transverse_refuses_orthogonal_pair() {
    let (code, kv) = run_kv(&["model", "run", "trace-transverse", "--model", "zn(2)", "--v", "U1", "--w", "U2"]);
    assert_eq!(code, 1);
    assert_eq!(get(&kv, "verdict"), "refused");
}

#[test]
fn big_set_of_a_diagonal_element() {
    let (code, kv) = run_kv(&["model", "run", "big-set", "--model", "zn(3)", "--element", "(1,0,2)"]);
    assert_eq!(code, 0);
    assert_eq!(get(&kv, "big_set"), "{U1, U3}");
    assert_eq!(get(&kv, "pairwise_orthogonal"), "true");
}
