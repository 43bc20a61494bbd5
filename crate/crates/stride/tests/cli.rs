use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stride::save_trace;
use stride_core::{generate_trace, GaitProfile};

fn stride(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stride")).args(args).env_remove("STRIDE_CONFIG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_walk(dir: &Path, name: &str, profile: &GaitProfile) -> (PathBuf, f64) {
    let (trace, truth) = generate_trace(profile).unwrap();
    let path = dir.join(name);
    save_trace(&trace, &path).unwrap();
    (path, truth.true_distance_m)
}

fn uniform(steps: usize) -> GaitProfile {
    GaitProfile { step_count: steps, ..GaitProfile::default() }
}

fn field(json: &serde_json::Value, path: &[&str]) -> f64 {
    path.iter().fold(json, |v, k| &v[*k]).as_f64().unwrap()
}

#[test]
fn detect_lists_every_step() {
    let dir = tempfile::tempdir().unwrap();
    let (path, _) = write_walk(dir.path(), "ten.csv", &uniform(10));
    let out = stride(&["detect", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let events: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let events = events.as_array().unwrap();
    assert_eq!(events.len(), 10);
    for e in events {
        assert!(e["start_t"].as_f64() <= e["peak_t"].as_f64());
        assert!(e["peak_t"].as_f64() <= e["end_t"].as_f64());
    }

    let text = stride(&["detect", path.to_str().unwrap()]);
    assert!(stdout(&text).ends_with("10 steps\n"));
}

#[test]
fn missing_trace_names_the_path() {
    let out = stride(&["detect", "/nonexistent/walk.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("/nonexistent/walk.csv"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn malformed_row_reports_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "t,x,y,z\n0,0,0,9.81\n0.02,0,zero,9.81\n").unwrap();
    let out = stride(&["estimate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn estimate_uniform_and_empty_walks() {
    let dir = tempfile::tempdir().unwrap();
    let (ten, _) = write_walk(dir.path(), "ten.csv", &uniform(10));
    let out = stride(&["estimate", ten.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(field(&json, &["proposed", "distance_m"]), 10.0);
    assert_eq!(json["proposed"]["step_count"], 10);
    assert!(stdout(&stride(&["estimate", ten.to_str().unwrap()])).contains("proposed_distance_m 10.000000"));

    let (none, _) = write_walk(dir.path(), "none.csv", &uniform(0));
    let out = stride(&["estimate", none.to_str().unwrap(), "--json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(field(&json, &["proposed", "distance_m"]), 0.0);
    assert_eq!(field(&json, &["baseline", "distance_m"]), 0.0);
}

#[test]
fn varying_strides_favour_the_dynamic_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let profile = GaitProfile { step_count: 40, stride_length_cv: 0.25, seed: 7, ..GaitProfile::default() };
    let (path, truth) = write_walk(dir.path(), "vary.csv", &profile);
    let out = stride(&["estimate", path.to_str().unwrap(), "--json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let proposed = (field(&json, &["proposed", "distance_m"]) - truth).abs();
    let baseline = (field(&json, &["baseline", "distance_m"]) - truth).abs();
    assert!(proposed < baseline, "proposed error {proposed}, baseline error {baseline}");
}

#[test]
fn tuning_flags_change_the_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let (path, _) = write_walk(dir.path(), "ten.csv", &uniform(10));
    let out = stride(&["estimate", path.to_str().unwrap(), "--base-length", "0.5", "--fixed-length", "1", "--json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(field(&json, &["proposed", "distance_m"]), 5.0);
    assert_eq!(field(&json, &["baseline", "distance_m"]), 10.0);

    let out = stride(&["estimate", path.to_str().unwrap(), "--threshold", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synth_default_sweep_and_seed_repeatability() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = stride(&["synth", "-o", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stdout(&out).trim_end().ends_with("manifest.json"));
    }
    let traces = fs::read_dir(a.path()).unwrap().filter(|e| e.as_ref().unwrap().path().extension().unwrap() == "csv");
    assert_eq!(traces.count(), 50);
    for name in ["manifest.json", "trace_000.csv", "trace_049.csv", "truth_025.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }

    let c = tempfile::tempdir().unwrap();
    stride(&["synth", "-o", c.path().to_str().unwrap(), "--seed", "99"]);
    assert_ne!(fs::read(a.path().join("trace_000.csv")).unwrap(), fs::read(c.path().join("trace_000.csv")).unwrap());
}

#[test]
fn invalid_profile_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("p.json");
    fs::write(&profile, r#"{"cadence_hz": 0}"#).unwrap();
    let out = stride(&["synth", profile.to_str().unwrap(), "-o", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out").join("manifest.json").exists());
}

#[test]
fn compare_default_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    stride(&["synth", "-o", corpus.to_str().unwrap()]);
    let manifest = corpus.join("manifest.json");
    let report = dir.path().join("report.json");
    let plot = dir.path().join("plot.csv");
    let out = stride(&[
        "compare",
        manifest.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("trace_049"));
    assert!(text.contains("proposed_mae_m"));

    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 50);
    assert!(field(&json, &["error_report", "proposed_mae_m"]) < field(&json, &["error_report", "baseline_mae_m"]));
    assert!(field(&json, &["error_report", "proposed_slope"]) < field(&json, &["error_report", "baseline_slope"]));

    let plot = fs::read_to_string(&plot).unwrap();
    assert_eq!(plot.lines().next(), Some("true_distance,proposed_error,baseline_error"));
    assert_eq!(plot.lines().count(), 51);

    let again = stride(&["compare", manifest.to_str().unwrap(), "--json"]);
    let again_json: serde_json::Value = serde_json::from_str(&stdout(&again)).unwrap();
    assert_eq!(again_json, json);
}

#[test]
fn single_trace_corpus_still_prints_its_table() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("p.json");
    fs::write(&profile, r#"{"step_count": 12}"#).unwrap();
    stride(&["synth", profile.to_str().unwrap(), "-o", dir.path().to_str().unwrap()]);
    let out = stride(&["compare", dir.path().join("manifest.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("trace_000"));
    assert!(stdout(&out).contains("error report unavailable"));
    assert!(stderr(&out).contains("warning"));
}

#[test]
fn config_file_env_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let (path, _) = write_walk(dir.path(), "ten.csv", &uniform(10));
    let config = dir.path().join("cfg.json");
    fs::write(&config, r#"{"weighting": {"base_step_length_m": 2.0}, "fixed_step_length_m": 0.5}"#).unwrap();
    let distances = |cmd: &mut Command| {
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        (field(&json, &["proposed", "distance_m"]), field(&json, &["baseline", "distance_m"]))
    };
    let bin = env!("CARGO_BIN_EXE_stride");
    let trace = path.to_str().unwrap();

    let by_flag =
        distances(Command::new(bin).args(["--config", config.to_str().unwrap(), "estimate", trace, "--json"]));
    assert_eq!(by_flag, (20.0, 5.0));
    let by_env = distances(Command::new(bin).env("STRIDE_CONFIG", &config).args(["estimate", trace, "--json"]));
    assert_eq!(by_env, by_flag);
    let overridden = distances(Command::new(bin).env("STRIDE_CONFIG", &config).args([
        "estimate",
        trace,
        "--base-length",
        "1",
        "--json",
    ]));
    assert_eq!(overridden, (10.0, 5.0));
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (path, _) = write_walk(dir.path(), "ten.csv", &uniform(10));
    let trace = path.to_str().unwrap();
    for (name, body) in [
        ("unknown.json", r#"{"thresh": 1}"#),
        ("negative.json", r#"{"detector": {"step_threshold": -2}}"#),
        ("broken.json", "{"),
    ] {
        let config = dir.path().join(name);
        fs::write(&config, body).unwrap();
        let out = stride(&["--config", config.to_str().unwrap(), "estimate", trace]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", stderr(&out));
    }
    let out = stride(&["--config", "/nonexistent/cfg.json", "estimate", trace]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let profile = GaitProfile { noise_sigma_m_s2: 0.4, fake_peak_count: 4, ..GaitProfile::default() };
    let (path, _) = write_walk(dir.path(), "noisy.csv", &profile);
    let args = ["estimate", path.to_str().unwrap(), "--json"];
    assert_eq!(stride(&args).stdout, stride(&args).stdout);
    let args = ["detect", path.to_str().unwrap()];
    assert_eq!(stride(&args).stdout, stride(&args).stdout);
}
