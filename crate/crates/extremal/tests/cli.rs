use std::fs::File;
use std::process::{Command, Output};

use extremal::config::OutputFormat;
use extremal::matrix_io::read_matrix;
use extremal::render::Table;
use extremal_core::matrices::build_z;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extremal"))
        .args(args)
        .env_remove("EXTREMAL_PREC_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

#[test]
fn table1_is_deterministic() {
    let a = run(&["table1", "--format", "csv"]);
    let b = run(&["table1", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("n,c_n,bound_theorem,bound_altinisik,bound_mattila\n"));
    assert!(text.contains("\n8,0.002245345,0.002245332,0.001398601,1.62711e-8\n"));
}

#[test]
fn csv_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = run(&["bounds", "--from", "1", "--to", "6", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    // the console still gets the pretty layout
    assert!(stdout(&out).lines().next().unwrap().trim_start().starts_with("n  "));
    let table = Table::read(File::open(&path).unwrap(), OutputFormat::Csv).unwrap();
    assert_eq!(table.rows.len(), 6);
    let mut again = Vec::new();
    table.write(&mut again, OutputFormat::Csv).unwrap();
    assert_eq!(again, std::fs::read(&path).unwrap());
}

#[test]
fn tsv_output_uses_tabs() {
    let out = run(&["conjecture", "--from", "2", "--to", "4", "--format", "tsv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn precision_flag_and_environment_agree() {
    let flag = run(&["cn", "--n", "12", "--prec-bits", "256", "--format", "csv"]);
    let env = Command::new(env!("CARGO_BIN_EXE_extremal"))
        .args(["cn", "--n", "12", "--format", "csv"])
        .env("EXTREMAL_PREC_BITS", "256")
        .output()
        .unwrap();
    assert!(flag.status.success());
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn upper_constant_matches_its_eigenvalue() {
    let out = run(&["Cn", "--n", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "44.766068653");
    assert_eq!(row[1], row[2]);
}

#[test]
fn dump_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z5.txt");
    assert!(run(&["dump", "--matrix", "z", "--n", "5", "--out", path.to_str().unwrap()]).status.success());
    let m = read_matrix(std::io::BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(m, build_z(5).unwrap());
    let out = run(&["dump", "--input", path.to_str().unwrap(), "--digits", "6"]);
    assert!(out.status.success());
    // 1/c_5 = 1/0.037068335...
    assert!(stdout(&out).contains("lambda_max = 26.977"));
}

#[test]
fn brute_reports_all_ones_maximizer() {
    let out = run(&["brute", "--n", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("count_enumerated = 64"));
    assert!(text.contains("argmax_all_ones = true"));
    assert!(text.contains("singular_values_consistent = true"));
}

#[test]
fn verify_identities_passes() {
    let out = run(&["verify", "identities", "--max-n", "30"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("0 failed"));
}

#[test]
fn errors_writes_chart() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("e.svg");
    let out = run(&["errors", "--from", "2", "--to", "12", "--format", "csv", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 12);
    let chart = std::fs::read_to_string(&svg).unwrap();
    assert!(chart.starts_with("<svg"));
    assert_eq!(chart.matches("<polyline").count(), 3);
}

#[test]
fn gcd_bounds_command() {
    let out = run(&["gcd-bounds", "--set", "1..8", "--alpha", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).matches("PASS").count(), 2);
    let bad = run(&["gcd-bounds", "--set", "1,2,6"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["cn", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["table1", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--bound", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["brute", "--n", "8"]).status.code(), Some(2));
    assert_eq!(run(&["brute", "--n", "3", "--cap-override", "10"]).status.code(), Some(2));
    assert_eq!(run(&["errors", "--from", "1", "--to", "5"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["dump", "--input", "/nonexistent/m.txt"]).status.code(), Some(1));
}
