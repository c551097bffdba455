use distinct_sums::certify::{Certificate, Verdict};
use distinct_sums::cli::{
    run, GracefulRecord, OrderingRecord, TableEntry, EXIT_HYPOTHESIS, EXIT_USAGE,
};
use distinct_sums::group::{check_entries, Variant};
use distinct_sums::oracle::VerificationReport;

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["distinct-sums"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn certificate_json_round_trips() {
    let (code, out, _) = run_args(&[
        "--no-cache",
        "--format",
        "json",
        "certify",
        "8",
        "--composite",
    ]);
    assert_eq!(code, 0);
    let cert: Certificate = serde_json::from_str(&out).unwrap();
    assert_eq!(cert.verdict, Verdict::Covered);
    assert_eq!(cert.discharged.len(), 1);
    assert_eq!(cert.discharged[0].modulus, 12u32.into());
    assert_eq!(cert.discharged[0].condition_d_bound, 2u32.into());
    assert_eq!(
        serde_json::from_str::<Certificate>(&cert.to_json()).unwrap(),
        cert
    );
    // Coefficients travel as strings.
    assert!(out.contains("\"-366468\""));
}

#[test]
fn composite_certificate_text_mentions_discharge() {
    let (code, out, _) = run_args(&["--no-cache", "certify", "8", "--composite"]);
    assert_eq!(code, 0);
    assert!(out.contains("discharged: 12 (largest Condition-D set has size 2)"));
}

#[test]
fn ordering_json_round_trips() {
    let (code, out, _) = run_args(&["--format", "json", "construct", "9", "--remove", "7"]);
    assert_eq!(code, 0);
    let rec: OrderingRecord = serde_json::from_str(&out).unwrap();
    assert_eq!(rec.modulus, 9);
    assert_eq!(rec.entries.len(), 7);
    assert_eq!(rec.removed, vec![7]);
    assert!(check_entries(9, &rec.entries, Variant::Alspach).valid);
    let again: OrderingRecord =
        serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
    assert_eq!(again, rec);
}

#[test]
fn construct_two_removed() {
    let (code, out, _) = run_args(&["--format", "json", "construct", "7", "--remove", "4,2"]);
    assert_eq!(code, 0);
    let rec: OrderingRecord = serde_json::from_str(&out).unwrap();
    let mut sorted = rec.entries.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, vec![1, 3, 5, 6]);
    assert_eq!(rec.partial_sums.len(), 5);
}

#[test]
fn graceful_json_round_trips() {
    let (code, out, _) = run_args(&["--format", "json", "graceful", "9", "25"]);
    assert_eq!(code, 0);
    let rec: GracefulRecord = serde_json::from_str(&out).unwrap();
    assert_eq!(rec.permutation.first_difference(), Some(9));
    assert_eq!(rec.differences, rec.permutation.differences());
}

#[test]
fn impossible_pair_names_the_reason() {
    let (code, _, err) = run_args(&["graceful", "2", "8"]);
    assert_eq!(code, EXIT_HYPOTHESIS);
    assert!(err.contains("no graceful permutation of length 8"));
}

#[test]
fn verify_report_json() {
    let (code, out, _) = run_args(&[
        "--format",
        "json",
        "verify",
        "10",
        "--variant",
        "archdeacon",
    ]);
    assert_eq!(code, 0);
    let report: VerificationReport = serde_json::from_str(&out).unwrap();
    assert!(report.holds());
    assert_eq!(report.modulus, 10);
}

#[test]
fn find_orders_a_full_set() {
    let (code, out, _) = run_args(&[
        "--format",
        "json",
        "find",
        "6",
        "--set",
        "1,2,3,4,5",
        "--variant",
        "archdeacon",
    ]);
    assert_eq!(code, 0);
    let rec: OrderingRecord = serde_json::from_str(&out).unwrap();
    assert!(check_entries(6, &rec.entries, Variant::Archdeacon).valid);
    let (code, out, _) = run_args(&[
        "find",
        "4",
        "--set",
        "2",
        "--variant",
        "archdeacon",
        "--length",
        "1",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ordering: (2)"));
}

#[test]
fn find_refuses_zero_sum_and_zero_entries() {
    let (code, _, err) = run_args(&["find", "4", "--set", "1,3"]);
    assert_eq!(code, EXIT_HYPOTHESIS);
    assert!(err.contains("sum of the set is 0"));
    let (code, _, _) = run_args(&["find", "4", "--set", "0,1"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn table_json_and_cache_persist() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let (code, out, _) = run_args(&[
        "--cache", cache, "--format", "json", "table1", "--k-max", "5",
    ]);
    assert_eq!(code, 0);
    let entries: Vec<TableEntry> = serde_json::from_str(&out).unwrap();
    let row5: Vec<String> = entries
        .iter()
        .filter(|e| e.k == 5)
        .map(|e| e.coefficient.to_string())
        .collect();
    assert_eq!(row5, vec!["4", "-2", "-4"]);
    let stored = std::fs::read_to_string(dir.path().join("coefficients.txt")).unwrap();
    assert!(stored.lines().any(|l| l == "F 5 4 4 3 4 4 -4"));
    let (code, text, _) = run_args(&["--cache", cache, "table1", "--k-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(text, "2: 1\n3: -1 0\n4: 1 -1\n5: 4 -2 -4\n");
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = run_args(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("certify"));
}
