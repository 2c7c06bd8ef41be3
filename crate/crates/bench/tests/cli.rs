use std::process::Command;

use hadgal_bench::report::{Report, CSV_COLUMNS};

fn hadgal(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hadgal")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn agree_to_12_digits(csv_field: &str, json_value: f64) -> bool {
    let parsed: f64 = csv_field.parse().unwrap();
    parsed == json_value || ((parsed - json_value) / json_value).abs() <= 5e-12
}

#[test]
fn solve_poisson_classical_json() {
    let (code, stdout, _) = hadgal(&["solve", "--problem", "poisson", "--n", "16", "--formulation", "classical", "--solver", "newton-sjt"]);
    assert_eq!(code, 0);
    let report = Report::from_json(&stdout).unwrap();
    assert_eq!(report.records.len(), 1);
    let rec = &report.records[0];
    assert!(rec.report.converged);
    assert_eq!(rec.report.iterates, 1);
    assert!(rec.report.quad_evals_iteration > 0);
    assert!(report.meta.command.starts_with("solve --problem poisson"));
}

#[test]
fn unknown_problem_exits_2() {
    let (code, stdout, stderr) = hadgal(&["solve", "--problem", "nosuch"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("burgers"), "{stderr}");
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(hadgal(&["solve", "--problem", "poisson", "--basis", "spline"]).0, 2);
    assert_eq!(hadgal(&["solve", "--problem", "poisson", "--damping", "1.5"]).0, 2);
    assert_eq!(hadgal(&["solve", "--problem", "poisson", "--n", "0"]).0, 2);
    assert_eq!(hadgal(&["convergence", "--problem", "poisson", "--n-list", "16,8"]).0, 2);
    assert_eq!(hadgal(&["jacobian-check", "--problem", "poisson", "--n", "65"]).0, 2);
    assert_eq!(hadgal(&["frobnicate"]).0, 2);
    assert_eq!(hadgal(&["--help"]).0, 0);
}

#[test]
fn non_convergence_exits_1() {
    let (code, stdout, _) = hadgal(&["solve", "--problem", "burgers", "--max-iter", "1"]);
    assert_eq!(code, 1);
    let report = Report::from_json(&stdout).unwrap();
    assert!(!report.records[0].report.converged);
}

#[test]
fn compare_writes_csv_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let (code, stdout, stderr) = hadgal(&[
        "compare", "--problem", "burgers", "--n", "32", "--output", path.to_str().unwrap(), "--format", "csv",
    ]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.is_empty());
    assert!(stderr.contains("classical") && stderr.contains("hadamard"));

    let mut reader = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, CSV_COLUMNS);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][3], "classical");
    assert_eq!(&rows[1][3], "hadamard");
    for row in &rows {
        assert_eq!(&row[5], "true");
        assert!(!row[8].is_empty() && !row[9].is_empty());
    }
    // no iteration-time integration for the Hadamard form
    assert_eq!(&rows[1][11], "0");
    assert_ne!(&rows[0][11], "0");
}

#[test]
fn compare_json_has_difference() {
    let (code, stdout, _) = hadgal(&["compare", "--problem", "burgers", "--n", "32"]);
    assert_eq!(code, 0);
    let report = Report::from_json(&stdout).unwrap();
    let diff = report.comparison.unwrap().solution_diff_inf;
    assert!(diff > 1e-6);
    let a = report.records[0].solution();
    let b = report.records[1].solution();
    assert_eq!(a.sub(&b).unwrap().norm_inf(), diff);
}

#[test]
fn csv_and_json_agree() {
    let base = ["convergence", "--problem", "reaction", "--n-list", "4,8,16", "--formulation", "classical"];
    let (c1, json, _) = hadgal(&base);
    let (c2, csv_text, _) = hadgal(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!((c1, c2), (0, 0));
    let report = Report::from_json(&json).unwrap();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), report.records.len());
    for (row, rec) in rows.iter().zip(&report.records) {
        assert_eq!(row[2].parse::<usize>().unwrap(), rec.n);
        assert_eq!(row[6].parse::<usize>().unwrap(), rec.report.iterates);
        assert!(agree_to_12_digits(&row[8], rec.error_l2.unwrap()));
        assert!(agree_to_12_digits(&row[9], rec.error_max.unwrap()));
        // the two invocations time separately; only the format is checked
        assert!(row[12].parse::<f64>().is_ok());
    }
    for rec in &report.records[1..] {
        let order = rec.observed_order.unwrap();
        assert!((1.8..=2.2).contains(&order), "{order}");
    }
}

#[test]
fn json_round_trip_preserves_records() {
    let (_, stdout, _) = hadgal(&["solve", "--problem", "reaction", "--n", "8", "--basis", "modal_poly"]);
    let report = Report::from_json(&stdout).unwrap();
    let again = Report::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(report, again);
}

#[test]
fn jacobian_check_passes() {
    let (code, stdout, _) = hadgal(&["jacobian-check", "--problem", "burgers", "--n", "12", "--seed", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut reader = csv::Reader::from_reader(stdout.as_bytes());
    let forms: Vec<String> = reader.records().map(|r| r.unwrap()[3].to_string()).collect();
    assert_eq!(forms, ["hadamard", "kronecker"]);
}

#[test]
fn picard_uses_problem_damping() {
    let (code, stdout, _) = hadgal(&["solve", "--problem", "burgers", "--n", "16", "--solver", "picard", "--freeze", "q"]);
    assert_eq!(code, 0);
    let report = Report::from_json(&stdout).unwrap();
    assert!(report.records[0].report.iterates <= 200);
}
