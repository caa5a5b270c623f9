//! End-to-end runs of the `mwspec` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mwspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn write_example(dir: &Path) -> String {
    let p = path(dir, "example.json");
    let o = mwspec(&["gen", "--example", "--out", &p]);
    assert_eq!(o.status.code(), Some(0));
    p
}

#[test]
fn gen_is_deterministic_and_prints_the_content_hash() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    let args = |out: &str| {
        [
            "gen",
            "--n",
            "7",
            "--s",
            "3",
            "--seed",
            "42",
            "--extra-edges",
            "4",
            "--out",
            out,
        ]
        .map(str::to_owned)
    };
    let oa = Command::new(env!("CARGO_BIN_EXE_mwspec"))
        .args(args(&a))
        .output()
        .unwrap();
    let ob = Command::new(env!("CARGO_BIN_EXE_mwspec"))
        .args(args(&b))
        .output()
        .unwrap();
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(stdout(&oa), stdout(&ob));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let hash = stdout(&oa).trim().to_owned();
    assert_eq!(hash.len(), 64);
    assert!(hash.bytes().all(|c| c.is_ascii_hexdigit()));

    let other = path(dir.path(), "c.json");
    let oc = mwspec(&[
        "gen",
        "--n",
        "7",
        "--s",
        "3",
        "--seed",
        "43",
        "--extra-edges",
        "4",
        "--out",
        &other,
    ]);
    assert_ne!(stdout(&oc), stdout(&oa));
}

#[test]
fn gen_rejects_a_single_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let o = mwspec(&[
        "gen",
        "--n",
        "1",
        "--s",
        "2",
        "--out",
        &path(dir.path(), "x.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be"));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn verify_example_passes_and_reports_each_beta() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    let out = path(dir.path(), "report.json");
    let o = mwspec(&[
        "verify", "--input", &input, "--beta", "0.5", "--beta", "1", "--beta", "10", "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("passed: all"));

    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["n"], 4);
    assert_eq!(report["s"], 2);
    assert_eq!(report["kernel"], "exact");
    let mut betas: Vec<f64> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|c| c["beta"].as_f64())
        .collect();
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    assert_eq!(betas, [0.5, 1.0, 10.0]);
    assert_eq!(report["summary"]["failed"], 0);
}

#[test]
fn verify_both_kernels_writes_two_reports() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    let out = path(dir.path(), "report.json");
    let o = mwspec(&[
        "verify", "--input", &input, "--kernel", "both", "--beta", "1", "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let reports: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let kernels: Vec<&str> = reports
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kernel"].as_str().unwrap())
        .collect();
    assert_eq!(kernels, ["float", "exact"]);
}

#[test]
fn perturbed_distance_exits_one_and_names_failures() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    let o = mwspec(&[
        "verify",
        "--input",
        &input,
        "--beta",
        "1",
        "--perturb-d",
        "1,3,1.1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let line = stdout(&o);
    assert!(line.starts_with("failed: "), "{line}");
    assert!(line.contains("P1"), "{line}");
}

#[test]
fn malformed_perturbation_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    for bad in ["0,1,1.1", "1,2", "9,1,1.1", "1,1,inf"] {
        let o = mwspec(&["verify", "--input", &input, "--perturb-d", bad]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn random_float_instance_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "r.json");
    assert_eq!(
        mwspec(&[
            "gen",
            "--n",
            "9",
            "--s",
            "2",
            "--seed",
            "5",
            "--extra-edges",
            "3",
            "--out",
            &input
        ])
        .status
        .code(),
        Some(0)
    );
    let o = mwspec(&["verify", "--input", &input, "--dense-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = mwspec(&["verify", "--input", &path(dir.path(), "absent.json")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn malformed_instance_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "bad.json");
    std::fs::write(&input, "{\"n\": 2,").unwrap();
    let o = mwspec(&["verify", "--input", &input]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_and_output_must_differ() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    let before = std::fs::read(&input).unwrap();
    let o = mwspec(&["verify", "--input", &input, "--out", &input]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(std::fs::read(&input).unwrap(), before);
}

#[test]
fn small_campaign_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    let run = |out: &str, jobs: &str| {
        mwspec(&[
            "verify", "--count", "12", "--seed", "9", "--n-max", "6", "--jobs", jobs, "--out", out,
        ])
    };
    let (oa, ob) = (run(&a, "1"), run(&b, "3"));
    assert_eq!(oa.status.code(), Some(0), "{}", stdout(&oa));
    assert_eq!(stdout(&oa), stdout(&ob));
    assert!(stdout(&oa).starts_with("12 instances: passed: all"));
    let strip = |p: &str| {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        for r in v["reports"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("wall_time_s");
        }
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn golden_passes() {
    let o = mwspec(&["golden"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert!(lines[..8].iter().all(|l| l.starts_with("ok")));
    assert!(lines[8].starts_with("golden passed"));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "bench.csv");
    let o = mwspec(&["bench", "--n", "2,10", "--s", "1,2", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("n,s,t_closed_form,t_dense,speedup,max_rel_err,status")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with(",OK")));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(mwspec(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mwspec(&["--help"]).status.code(), Some(0));
}
