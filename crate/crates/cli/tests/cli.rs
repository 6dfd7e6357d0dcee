use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cdut::decision::check_separation;
use cdut::{gadget_a, gadget_b, BitVector};
use cdut_cli::instance::{format_instance, read_instance};

fn cdut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdut"))
        .args(args)
        .env("CDUT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(stdout(out).trim()).expect("one JSON object")
}

fn gen(dir: &Path, sub: &str, args: &[&str]) -> (String, String) {
    let target = path(dir, sub);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &target]);
    let out = cdut(&full);
    assert_eq!(out.status.code(), Some(0), "gen failed: {}", String::from_utf8_lossy(&out.stderr));
    (path(dir, &format!("{sub}/a.txt")), path(dir, &format!("{sub}/b.txt")))
}

fn meta(dir: &Path, sub: &str, key: &str) -> String {
    let text = fs::read_to_string(dir.join(sub).join("meta.txt")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
        .unwrap_or_else(|| panic!("no {key} in meta"))
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = gen(dir.path(), "u", &["uniform", "--n", "12", "--dim", "3", "--seed", "4", "--metric", "linf"]);
    let parsed = read_instance(Path::new(&a)).unwrap();
    assert_eq!(parsed.points.len(), 12);
    assert_eq!(parsed.metric, Some(cdut::Metric::LInf));
    assert_eq!(format_instance(&parsed.points, parsed.metric), fs::read_to_string(&a).unwrap());
}

#[test]
fn generation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for generator in ["uniform", "clustered", "translated-copy", "separated-planted"] {
        let m = if generator == "translated-copy" { "10" } else { "4" };
        let args = [generator, "--n", "10", "--m", m, "--seed", "9"];
        let first = gen(dir.path(), "one", &args);
        let second = gen(dir.path(), "two", &args);
        for (x, y) in [(&first.0, &second.0), (&first.1, &second.1)] {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{generator}");
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path(dir.path(), "missing.txt");
    assert_eq!(cdut(&["compute", &missing, &missing, "--algorithm", "exact1d"]).status.code(), Some(1));

    let bad = path(dir.path(), "bad.txt");
    fs::write(&bad, "d=1 n=2\n1.5\nnot-a-number\n").unwrap();
    let out = cdut(&["compute", &bad, &bad, "--algorithm", "exact1d"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let (a, b) = gen(dir.path(), "u", &["uniform", "--n", "5", "--dim", "2"]);
    // exact1d needs d = 1
    assert_eq!(cdut(&["compute", &a, &b, "--algorithm", "exact1d"]).status.code(), Some(2));
    assert_eq!(
        cdut(&["compute", &a, &b, "--algorithm", "approx-v1", "--epsilon", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn metric_tags_must_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = gen(dir.path(), "x", &["uniform", "--n", "4", "--dim", "2", "--metric", "l1"]);
    let (_, b) = gen(dir.path(), "y", &["uniform", "--n", "4", "--dim", "2", "--metric", "linf"]);
    assert_eq!(cdut(&["compute", &a, &b, "--algorithm", "approx-v1"]).status.code(), Some(2));
    let out = cdut(&["compute", &a, &b, "--algorithm", "approx-v1", "--metric", "l2", "--json"]);
    assert_eq!(json(&out)["metric"], "l2");
}

#[test]
fn seeded_runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gen(dir.path(), "u", &["uniform", "--n", "40", "--m", "15", "--dim", "2", "--seed", "2"]);
    for algorithm in ["approx-v1", "approx-v2", "localnet"] {
        let run = |threads: &str| {
            let out = Command::new(env!("CARGO_BIN_EXE_cdut"))
                .args(["compute", &a, &b, "--algorithm", algorithm, "--seed", "7", "--json"])
                .env("CDUT_THREADS", threads)
                .output()
                .unwrap();
            let mut v = json(&out);
            v.as_object_mut().unwrap().remove("wall_ms");
            v
        };
        assert_eq!(run("1"), run("4"), "{algorithm}");
    }
}

#[test]
fn gadget_files_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gen(dir.path(), "g", &["ov-gadget", "--x", "1010", "--y", "0101"]);
    let x: BitVector = "1010".parse().unwrap();
    let y: BitVector = "0101".parse().unwrap();
    assert_eq!(read_instance(Path::new(&a)).unwrap().points, gadget_a(&x));
    assert_eq!(read_instance(Path::new(&b)).unwrap().points, gadget_b(&y));
    assert_eq!(meta(dir.path(), "g", "orthogonal"), "true");

    // orthogonal pair: A(x) sits inside B(y) at t = 0
    let out = cdut(&["compute", &a, &b, "--algorithm", "exact1d", "--json"]);
    assert_eq!(json(&out)["value"], 0.0);

    let (a, b) = gen(dir.path(), "h", &["ov-gadget", "--x", "1100", "--y", "0110"]);
    let out = cdut(&["compute", &a, &b, "--algorithm", "exact1d", "--json"]);
    assert!(json(&out)["value"].as_f64().unwrap() > 0.0);

    let bad = cdut(&["gen", "ov-gadget", "--x", "10", "--y", "101", "--out", &path(dir.path(), "z")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn localnet_recovers_translated_copy() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gen(dir.path(), "t", &["translated-copy", "--n", "25", "--dim", "2", "--seed", "5"]);
    let shift: Vec<f64> = meta(dir.path(), "t", "shift").split(',').map(|s| s.parse().unwrap()).collect();
    for extra in [&[][..], &["--union-net"][..]] {
        let mut args = vec!["compute", &a, &b, "--algorithm", "localnet", "--epsilon", "0.25", "--json"];
        args.extend_from_slice(extra);
        let v = json(&cdut(&args));
        assert_eq!(v["value"], 0.0);
        let t: Vec<f64> = v["translation"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert_eq!(t, shift);
    }
}

#[test]
fn decide_planted_instances() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let s = seed.to_string();
        let common = ["separated-planted", "--n", "10", "--m", "4", "--dim", "2", "--seed", &s, "--radius", "1"];
        let (a, b) = gen(dir.path(), "yes", &common);
        let b_points = read_instance(Path::new(&b)).unwrap().points;
        assert!(check_separation(&b_points, 2.0, 1.0, 4).unwrap().holds);
        assert_eq!(cdut(&["decide", &a, &b, "--radius", "1", "--seed", &s]).status.code(), Some(0));

        let mut no = common.to_vec();
        no.extend_from_slice(&["--answer", "no"]);
        let (a, b) = gen(dir.path(), "no", &no);
        assert_eq!(meta(dir.path(), "no", "expect"), "no");
        let out = cdut(&["decide", &a, &b, "--radius", "1", "--seed", &s, "--json"]);
        assert_eq!(out.status.code(), Some(3));
        let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        assert_eq!(v["answer"], "NO");
    }
}

#[test]
fn decide_rejects_crowded_b() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gen(dir.path(), "u", &["uniform", "--n", "30", "--m", "4", "--dim", "2", "--scale", "5"]);
    let out = cdut(&["decide", &a, &b, "--radius", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("min pairwise") && err.contains("threshold"), "{err}");
}

#[test]
fn bench_reports_ratios_in_one_dimension() {
    let out = cdut(&["bench", "--algorithms", "exact1d,approx-v1", "--sizes", "20,30", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let ratio = row["ratio"].as_f64().unwrap();
        assert!((1.0 - 1e-9..=2.5).contains(&ratio), "{row}");
    }
}

#[test]
fn bench_ratios_for_sampling_algorithms() {
    let out = cdut(&[
        "bench", "--algorithms", "approx-v2,localnet", "--sizes", "15,25", "--reps", "5", "--epsilon", "0.25", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 20);
    let mut localnet_ok = 0;
    for row in &rows {
        let ratio = row["ratio"].as_f64().unwrap();
        assert!(ratio >= 1.0 - 1e-9, "{row}");
        if row["algorithm"] == "localnet" {
            localnet_ok += usize::from(ratio <= 1.25 + 1e-9);
        }
    }
    assert!(localnet_ok >= 9, "{localnet_ok}/10 localnet rows within 1 + eps");
}

#[test]
fn gadget_vectors_accept_commas() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gen(dir.path(), "g", &["ov-gadget", "--x", "1,0", "--y", "0,1"]);
    assert_eq!(read_instance(Path::new(&a)).unwrap().points.as_flat(), &[0.0, 1.0, 4.0, 6.0, 7.0, 9.0]);
    assert_eq!(read_instance(Path::new(&b)).unwrap().points.as_flat(), &[0.0, 1.0, 2.0, 3.0, 4.0, 6.0, 7.0, 9.0]);
}
