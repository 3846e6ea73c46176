//! End-to-end tests of the `hypodist` binary: flag handling, exit codes,
//! output files, and reproducibility.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypodist"))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_tiny_spectrum(path: &Path, shift: f64) {
    let mut text = String::from("t,value\n");
    for i in 0..50 {
        let t = i as f64 / 49.0;
        let v = (1.0 - (t - 0.5 - shift).abs() / 0.1).max(0.0);
        text.push_str(&format!("{t},{v}\n"));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn dist_identical_files_prints_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    write_tiny_spectrum(&a, 0.0);
    for metric in ["hausdorff", "l2", "sup"] {
        let out = bin()
            .args(["dist", "--metric", metric])
            .arg("--a")
            .arg(&a)
            .arg("--b")
            .arg(&a)
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        assert_eq!(stdout(&out), format!("metric,value\n{metric},0\n"));
    }
    assert!(dir.path().join("dist_manifest.json").exists());
}

#[test]
fn dist_rejects_mismatched_grids_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    write_tiny_spectrum(&a, 0.0);
    fs::write(&b, "t,value\n0.0,1.0\n1.0,2.0\n").unwrap();
    let out = bin()
        .args(["dist", "--metric", "hausdorff"])
        .arg("--a")
        .arg(&a)
        .arg("--b")
        .arg(&b)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("grid mismatch"), "{}", stderr(&out));
}

#[test]
fn dist_pruned_matches_default_and_oracle_reports_gap() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    write_tiny_spectrum(&a, 0.0);
    write_tiny_spectrum(&b, 0.06);
    let run = |extra: &[&str]| {
        let out = bin()
            .args(["dist", "--metric", "hausdorff"])
            .arg("--a")
            .arg(&a)
            .arg("--b")
            .arg(&b)
            .arg("--out")
            .arg(dir.path())
            .args(extra)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        stdout(&out)
    };
    let plain = run(&[]);
    let pruned = run(&["--pruned"]);
    assert_eq!(plain, pruned);

    let with_oracle = run(&["--oracle", "0.005"]);
    assert!(with_oracle.contains("oracle,"));
    assert!(with_oracle.contains("gap,"));
}

#[test]
fn unknown_metric_is_a_usage_error() {
    let out = bin()
        .args(["dist", "--a", "x", "--b", "y", "--metric", "manhattan"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn knn_cv_missing_labels_file_exits_1() {
    let out = bin()
        .args(["knn-cv", "--k", "3", "--metric", "sup", "--seed", "1"])
        .arg("--data")
        .arg(fixtures().join("spectra"))
        .arg("--labels")
        .arg(fixtures().join("no_such_labels.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn knn_cv_on_bundled_fixture_separates_the_classes() {
    let dir = tempfile::tempdir().unwrap();
    // Same recipe as the bundled config but on a coarser grid to keep the
    // test quick.
    let conf = dir.path().join("pipeline.conf");
    fs::write(
        &conf,
        "lo = 7000\nhi = 9500\nthreshold = 5\ntarget_grid_size = 2001\n\
         bandwidth = 4\nnormalization = max\n",
    )
    .unwrap();
    let out = bin()
        .args([
            "knn-cv",
            "--k",
            "3,5",
            "--metric",
            "hausdorff,l2,sup",
            "--seed",
            "11",
        ])
        .arg("--data")
        .arg(fixtures().join("spectra"))
        .arg("--labels")
        .arg(fixtures().join("spectra/labels.csv"))
        .arg("--pipeline")
        .arg(&conf)
        .arg("--dump-processed")
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));

    let csv = fs::read_to_string(dir.path().join("loocv_errors.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,metric,error"));
    for line in lines {
        assert!(line.ends_with(",0"), "non-zero loocv error: {line}");
    }
    let provenance = fs::read_to_string(dir.path().join("provenance.log")).unwrap();
    assert_eq!(provenance.lines().count(), 10);
    assert!(dir.path().join("processed/s01.csv").exists());
    assert!(dir.path().join("knn-cv_manifest.json").exists());
}

#[test]
fn simulate_is_reproducible_and_shaped_like_the_reference_table() {
    let run = |dir: &Path, threads: Option<&str>| {
        let mut cmd = bin();
        cmd.args([
            "simulate", "--model", "2", "--reps", "2", "--seed", "7", "--train", "6", "--test",
            "6", "--grid", "40",
        ])
        .arg("--out")
        .arg(dir);
        if let Some(t) = threads {
            cmd.env("RAYON_NUM_THREADS", t);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        fs::read_to_string(dir.join("simulate_errors.csv")).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let d3 = tempfile::tempdir().unwrap();
    let first = run(d1.path(), None);
    let second = run(d2.path(), None);
    assert_eq!(first, second, "same seed must give byte-identical CSV");
    let threaded = run(d3.path(), Some("4"));
    assert_eq!(first, threaded, "thread count must not change the CSV");

    // 4 ks x 3 metrics x 2 replications + header
    assert_eq!(first.lines().count(), 25);
    assert_eq!(
        first.lines().next(),
        Some("k,metric,mean_rate,replication,rate")
    );
    let manifest = fs::read_to_string(d1.path().join("simulate_manifest.json")).unwrap();
    assert!(manifest.contains("\"seed\": 7"));
}

#[test]
fn simulate_model1_hausdorff_dominates_classical_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "simulate", "--model", "1", "--reps", "3", "--seed", "2024", "--train", "12", "--test",
            "12", "--grid", "60",
        ])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("simulate_errors.csv")).unwrap();
    let mut means = std::collections::HashMap::new();
    for line in csv.lines().skip(1) {
        let parts: Vec<&str> = line.split(',').collect();
        let k: usize = parts[0].parse().unwrap();
        means.insert((k, parts[1].to_owned()), parts[2].parse::<f64>().unwrap());
    }
    for k in [3usize, 5, 7, 9] {
        let h = means[&(k, "hausdorff".to_owned())];
        assert!(h < means[&(k, "l2".to_owned())], "k = {k}");
        assert!(h < means[&(k, "sup".to_owned())], "k = {k}");
    }
}

#[test]
fn bench_reports_equal_checksums_per_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "bench", "--sizes", "100,1000", "--seed", "3", "--pairs", "2",
        ])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "size,kernel,seconds,checksum");
    assert_eq!(lines.len(), 5);
    for chunk in lines[1..].chunks(2) {
        let naive: Vec<&str> = chunk[0].split(',').collect();
        let pruned: Vec<&str> = chunk[1].split(',').collect();
        assert_eq!(naive[0], pruned[0]);
        assert_eq!((naive[1], pruned[1]), ("naive", "pruned"));
        assert_eq!(
            naive[3], pruned[3],
            "checksum mismatch at size {}",
            naive[0]
        );
    }
    assert!(dir.path().join("bench.csv").exists());
    assert!(dir.path().join("bench_manifest.json").exists());
}
