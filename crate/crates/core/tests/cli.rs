mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signminors"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_sylvester_writes_had() {
    let out = bin(&["gen", "--sylvester", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "++++\n+-+-\n++--\n+--+\n"
    );
}

#[test]
fn gen_json_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p12.json");
    let out = bin(&[
        "gen",
        "--paley1",
        "11",
        "--format",
        "json",
        "-o",
        path_str(&path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"], 12);
    let data = v["data"].as_array().unwrap();
    assert_eq!(data.len(), 12);
    assert!(data.iter().all(|r| r.as_array().unwrap().len() == 12));

    let verify = bin(&["verify", path_str(&path)]);
    assert_eq!(
        verify.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&verify.stderr)
    );
    assert_eq!(report(&verify)["results"]["all_passed"], true);
}

#[test]
fn gen_random_is_seeded() {
    let a = bin(&["gen", "--random", "5x7", "--seed", "9"]);
    let b = bin(&["gen", "--random", "5x7", "--seed", "9"]);
    let c = bin(&["gen", "--random", "5x7", "--seed", "10"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 5);
}

#[test]
fn gen_rejects_bad_parameters() {
    assert_eq!(bin(&["gen", "--paley1", "13"]).status.code(), Some(2));
    assert_eq!(bin(&["gen", "--sylvester", "14"]).status.code(), Some(2));
    assert_eq!(bin(&["gen", "--random", "5by7"]).status.code(), Some(2));
    assert_eq!(bin(&["gen"]).status.code(), Some(2));
    assert_eq!(
        bin(&["gen", "--sylvester", "2", "--paley2", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn minors_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h8.had");
    std::fs::write(&h, bin(&["gen", "--sylvester", "3"]).stdout).unwrap();
    let csv = dir.path().join("hist.csv");
    let out = bin(&[
        "minors",
        path_str(&h),
        "-m",
        "3",
        "--histogram",
        "--csv",
        path_str(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["command", "inputs", "results", "metadata"]);
    assert_eq!(v["command"], "minors");
    assert_eq!(v["inputs"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["results"]["zero_count"], 1344);
    assert_eq!(v["results"]["total_count"], 3136);
    assert!(v["metadata"].get("wall_time_ms").is_none());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("det,count\n"));
    assert!(text.contains("\n0,1344\n"));

    let stdout_csv = bin(&["minors", path_str(&h), "-m", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(stdout_csv.stdout).unwrap(), text);

    let gram = report(&bin(&[
        "minors",
        path_str(&h),
        "-m",
        "4",
        "--engine",
        "gram",
    ]));
    assert_eq!(gram["results"]["sum_squares"], 286720);

    let m2 = report(&bin(&["minors", path_str(&h), "-m", "2"]));
    assert_eq!(m2["results"]["zero_count"], 336);
    let full3 = report(&bin(&["minors", path_str(&h), "-m", "3"]));
    let gram3 = report(&bin(&[
        "minors",
        path_str(&h),
        "-m",
        "3",
        "--engine",
        "gram",
    ]));
    assert_eq!(
        full3["results"]["sum_squares"],
        gram3["results"]["sum_squares"]
    );
}

#[test]
fn output_is_reproducible_and_timing_is_opt_in() {
    let a = bin(&["turan", "-m", "3", "--samples", "5000", "--seed", "4"]);
    let b = bin(&[
        "turan",
        "-m",
        "3",
        "--samples",
        "5000",
        "--seed",
        "4",
        "--threads",
        "2",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let t = report(&bin(&["table1", "--timing"]));
    assert!(t["metadata"]["wall_time_ms"].is_u64());
}

#[test]
fn budget_errors_exit_three() {
    let path = common::class_path(0);
    let out = bin(&["minors", path_str(&path), "-m", "8", "--work-cap", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("165636900"), "{msg}");
    assert!(msg.contains("gram"), "{msg}");
    let gram = bin(&[
        "minors",
        path_str(&path),
        "-m",
        "8",
        "--engine",
        "gram",
        "--work-cap",
        "100000",
    ]);
    assert_eq!(gram.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.had");
    std::fs::write(&bad, "++\n+x\n").unwrap();
    let out = bin(&["verify", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("row 2"));
    assert_eq!(
        bin(&["verify", "/nonexistent/file.had"]).status.code(),
        Some(2)
    );
    assert_eq!(bin(&["table1", "--m-max", "7"]).status.code(), Some(2));
    assert_eq!(bin(&["minors"]).status.code(), Some(2));
}

#[test]
fn verify_flags_non_hadamard_input() {
    let dir = tempfile::tempdir().unwrap();
    let ones = dir.path().join("ones.had");
    std::fs::write(&ones, "++++\n++++\n++++\n++++\n").unwrap();
    let out = bin(&["verify", path_str(&ones)]);
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    let failed: Vec<&str> = v["results"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["is_hadamard"]);
}

#[test]
fn verify_order16_within_budget() {
    let out = bin(&["verify", path_str(&common::class_path(4))]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["failed"], 0);
    assert_eq!(v["results"]["skipped_orders"].as_array().unwrap().len(), 0);
    let names: Vec<&str> = v["results"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for expected in [
        "cauchy_binet",
        "divisibility",
        "zero_count_formula",
        "complement_identity",
    ] {
        assert!(names.contains(&expected), "{expected}");
    }

    let capped = report(&bin(&[
        "verify",
        path_str(&common::class_path(4)),
        "--work-cap",
        "400000",
    ]));
    // 256 + 14400 + 313600 minors fit; order 4 alone needs 3312400
    assert_eq!(capped["results"]["skipped_orders"][0], 4);
}

#[test]
fn sampling_commands() {
    let t = report(&bin(&["turan", "-m", "3"]));
    assert_eq!(
        t["results"]["estimate"]["mean"],
        serde_json::json!({"num": "6", "den": "1"})
    );
    assert_eq!(t["results"]["agrees"], true);
    let g = report(&bin(&["gram-expect", "-m", "2", "-n", "4"]));
    assert_eq!(g["results"]["closed_form"]["num"], "12");
    let s = report(&bin(&["singular", "-m", "3"]));
    assert_eq!(
        s["results"]["estimate"]["mean"],
        serde_json::json!({"num": "5", "den": "8"})
    );
    let mc = report(&bin(&[
        "singular",
        "-m",
        "3",
        "--samples",
        "10000",
        "--seed",
        "1",
    ]));
    assert_eq!(mc["results"]["estimate"]["seed"], 1);
    assert_eq!(mc["inputs"]["mode"]["montecarlo"]["samples"], 10000);
}

#[test]
fn bounds_and_complement() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h12.had");
    std::fs::write(&h, bin(&["gen", "--paley2", "5"]).stdout).unwrap();
    let b = report(&bin(&["bounds", path_str(&h), "-m", "3"]));
    assert_eq!(b["results"]["equality_attained"], true);
    let c = bin(&["complement", path_str(&h)]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(report(&c)["results"]["pairs"].as_array().unwrap().len(), 11);
}

#[test]
fn table1_formats() {
    let text = String::from_utf8(bin(&["table1", "--format", "text"]).stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    let csv = String::from_utf8(bin(&["table1", "--format", "csv"]).stdout).unwrap();
    assert!(csv.contains("5,0.5312,0.5001,15,17,17/32,4097/8192"));
    assert_eq!(bin(&["table1", "--format", "had"]).status.code(), Some(2));
}

#[test]
fn library_entry_point_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = signminors::cli::run(
        ["signminors", "table1", "--format", "csv"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(out, bin(&["table1", "--format", "csv"]).stdout);
}
