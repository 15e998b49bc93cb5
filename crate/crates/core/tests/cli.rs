//! End-to-end tests of the binary: exit codes, file round trips, and byte
//! stability of reports.

use std::path::Path;
use std::process::{Command, Output};

use triorbit::ffield::FieldCtx;
use triorbit::files::table_to_json;
use triorbit::groups::{mk_dihedral, mk_suzuki_a};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_triorbit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

fn write_group(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn construct_writes_the_expected_extraspecial_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = run(&[
        "construct",
        "extraspecial_q",
        "--q",
        "9",
        "--m",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["format"], "cocycle-group/v1");
    assert_eq!(v["p"], 3);
    assert_eq!(v["n"], 4);
    assert_eq!(v["m"], 2);
}

#[test]
fn construct_rejects_unknown_family_and_missing_flags() {
    assert_eq!(code(&run(&["construct", "frobnicator"])), 2);
    assert_eq!(code(&run(&["construct", "extraspecial_q"])), 2);
    assert_eq!(code(&run(&["construct", "heisenberg_q", "--q", "12"])), 2);
}

#[test]
fn check3_true_false_unknown_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // True: the 27-element Heisenberg group.
    let o = run(&["construct", "heisenberg_q", "--q", "3", "--out"]);
    assert_eq!(code(&o), 2, "--out without a value is a usage error");
    let g = dir.path().join("h3.json");
    let o = run(&["construct", "heisenberg_q", "--q", "3", "--out", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&["check3", "--group", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["format"], "run-report/v1");
    assert_eq!(report["payload"]["is3"], true);
    assert_eq!(report["payload"]["r"], 3);

    // False: D_4 as a table file under the oracle.
    let d4 = write_group(dir.path(), "d4.json", &table_to_json(&mk_dihedral(4)));
    let o = run(&["check3", "--group", &d4, "--strategy", "oracle"]);
    assert_eq!(code(&o), 3);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["payload"]["is3"], false);
    assert_eq!(report["payload"]["r"], 4);

    // Usage: table files have no generator catalog.
    let o = run(&["check3", "--group", &d4, "--strategy", "exhibited"]);
    assert_eq!(code(&o), 2);

    // Unknown: an oracle request far beyond the table cap.
    let big = mk_suzuki_a(&FieldCtx::new(3, 8, None).unwrap(), 1).unwrap();
    let big = write_group(dir.path(), "big.json", &triorbit::files::cocycle_to_json(&big));
    let o = run(&["check3", "--group", &big, "--strategy", "oracle"]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["payload"]["is3"], serde_json::Value::Null);
    let notes = report["payload"]["notes"].to_string();
    assert!(notes.contains("size cap"), "notes: {notes}");
}

#[test]
fn check3_report_bytes_are_stable_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("su3.json");
    assert_eq!(code(&run(&["construct", "su3_sylow", "--q", "4", "--out", g.to_str().unwrap()])), 0);
    let a = run(&["check3", "--group", g.to_str().unwrap()]);
    let b = run(&["check3", "--group", g.to_str().unwrap()]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "identical inputs must give identical reports");
}

#[test]
fn scan_census_and_exit_codes() {
    let o = run(&["scan", "--q", "81", "--dim", "2"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["payload"]["cells"]["both"], 10);
    assert_eq!(report["payload"]["cells"]["admissible"], 40);
    assert_eq!(report["payload"]["cells"]["neither"], 80);
    assert_eq!(report["payload"]["witnesses"].as_array().unwrap().len(), 40);

    // Worker count must not change a byte.
    let multi = run(&["scan", "--q", "81", "--dim", "2", "--jobs", "5"]);
    assert_eq!(o.stdout, multi.stdout);

    // CSV summary.
    let csv = run(&["scan", "--q", "81", "--dim", "2", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    let text = stdout(&csv);
    assert!(text.starts_with("q,dim,hyperplane,admissible,both,neither\n"), "{text}");
    assert!(text.contains("81,2,0,40,10,80"), "{text}");

    // Not a prime power.
    assert_eq!(code(&run(&["scan", "--q", "6", "--dim", "1"])), 2);
}

#[test]
fn rank_on_a4_is_exactly_three() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("a4.json");
    let o = run(&["construct", "pq_frobenius", "--p", "2", "--q", "3", "--out", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["rank", "--group", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["payload"]["rank"], 3);
    assert_eq!(report["payload"]["exact"], true);
}

#[test]
fn standardize_reports_the_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("su3q3.json");
    assert_eq!(code(&run(&["construct", "su3_sylow", "--q", "3", "--out", g.to_str().unwrap()])), 0);
    let out = dir.path().join("canonical.json");
    let o = run(&[
        "standardize",
        "--group",
        g.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("isomorphic to 3^(1+2)"));
    // The canonical file is the Heisenberg group's own file.
    let h = dir.path().join("h3.json");
    assert_eq!(code(&run(&["construct", "heisenberg_q", "--q", "3", "--out", h.to_str().unwrap()])), 0);
    let canon = std::fs::read_to_string(&out).unwrap();
    let h3: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&h).unwrap()).unwrap();
    let canon: serde_json::Value = serde_json::from_str(&canon).unwrap();
    assert_eq!(canon["beta"], h3["beta"]);
}

#[test]
fn lambda2_and_orbits_commands() {
    let o = run(&["lambda2", "--p", "3", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("multiplicity-free"));

    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("h9.json");
    assert_eq!(code(&run(&["construct", "heisenberg_q", "--q", "9", "--out", g.to_str().unwrap()])), 0);
    let o = run(&["orbits", "--group", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = report["payload"].as_array().unwrap();
    assert!(reports.len() >= 2, "V and M reports expected");
    // The element-level partition rides along for table-sized groups.
    assert!(
        reports.iter().any(|r| r["sizes"] == serde_json::json!([720, 8, 1])),
        "{reports:?}"
    );
}

#[test]
fn seed_flag_never_changes_report_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("pe.json");
    assert_eq!(code(&run(&["construct", "p_epsilon", "--out", g.to_str().unwrap()])), 0);
    let a = run(&["check3", "--group", g.to_str().unwrap(), "--seed", "1"]);
    let b = run(&["check3", "--group", g.to_str().unwrap(), "--seed", "99"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
