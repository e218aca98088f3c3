use std::process::{Command, Output};

use tight_zcdp::accountant::BudgetLedger;
use tight_zcdp::ZcdpBound;

fn zcdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zcdp"))
        .args(args)
        .output()
        .expect("run zcdp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bound_prints_rho_tightness_and_source() {
    let o = zcdp(&["bound", "laplace", "--eps", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.367879441171 tight thm:zcdp-lap");
}

#[test]
fn bound_krr_four_symbols() {
    // (e - 1)/(e + 3), computed independently
    let o = zcdp(&["bound", "krr", "--eps", "1", "--k", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("0.300489181892 tight"));
}

#[test]
fn bound_json_round_trips() {
    let o = zcdp(&["bound", "dlaplace", "--eps", "1", "--delta", "2", "--json"]);
    assert!(o.status.success());
    let b: ZcdpBound = serde_json::from_str(stdout(&o).trim()).unwrap();
    let again = serde_json::to_string(&b).unwrap();
    assert_eq!(again, stdout(&o).trim());
    assert!((b.rho - 0.3934693402873666).abs() < 1e-12);
}

#[test]
fn large_k_is_reported_as_upper_bound() {
    let o = zcdp(&["bound", "krr", "--eps", "1", "--k", "20"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("upper-bound"));
}

#[test]
fn bad_parameters_exit_with_two() {
    for args in [
        &["bound", "laplace", "--eps", "-1"][..],
        &["bound", "krr", "--eps", "1"],
        &["bound", "gaussian", "--eps", "1"],
        &["curve", "laplace", "--eps", "1", "--points", "0"],
    ] {
        let o = zcdp(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn curve_is_csv_with_requested_rows() {
    let o = zcdp(&["curve", "generic", "--eps", "1", "--points", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[0].starts_with("alpha,"));
    let mut prev = 0.0;
    for row in &lines[1..] {
        let v: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(v >= prev && v <= 1.0);
        prev = v;
    }
}

#[test]
fn single_mechanism_verify_passes() {
    let o = zcdp(&["verify", "--mechanism", "krr", "--eps", "1", "--k", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn figure_to_unwritable_path_fails_with_one() {
    let o = zcdp(&[
        "figure",
        "--points",
        "3",
        "--out",
        "/nonexistent-dir/fig.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn figure_to_stdout_has_header_and_rows() {
    let o = zcdp(&["figure", "--points", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "eps,generic,laplace,dlaplace,krr,rappor,br"
    );
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn compose_sums_and_converts() {
    let dir = std::env::temp_dir().join(format!("zcdp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("plan.txt");
    std::fs::write(
        &file,
        "# two releases\nlaplace --eps 1\ngeneric --eps 0.5\n",
    )
    .unwrap();
    let o = zcdp(&[
        "compose",
        file.to_str().unwrap(),
        "--target-delta",
        "1e-6",
        "--json",
    ]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ledger: BudgetLedger = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(ledger.entries.len(), 2);
    let sum: f64 = ledger.entries.iter().map(|e| e.bound.rho).sum();
    assert_eq!(ledger.total, sum);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let eps = v["approx_dp"]["eps"].as_f64().unwrap();
    let expected = sum + 2.0 * (sum * (1e6f64).ln()).sqrt();
    assert!((eps - expected).abs() < 1e-12 * expected);
}

#[test]
fn compose_missing_file_is_usage_error() {
    let o = zcdp(&["compose", "/nonexistent-plan.txt"]);
    assert_eq!(o.status.code(), Some(2));
}
