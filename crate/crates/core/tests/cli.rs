mod common;

use common::{fixture, path_str, run, run_ok};
use promptmog::io::EmbeddingFile;

fn error_of(out: &std::process::Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {text}"))
}

#[test]
fn identity_kernel_scores_its_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    run_ok(&["vendi", "--in", path_str(&fixture("identity7.json")), "--kernel", "precomputed", "--out", path_str(&out)]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["mean_score"].as_f64().unwrap() - 7.0).abs() < 1e-9);
    assert_eq!(v["kernel"], "precomputed");
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
}

#[test]
fn filter_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kept.json");
    run_ok(&["filter", "--in", path_str(&fixture("records10.jsonl")), "--k", "4", "--out", path_str(&out)]);
    let got: Vec<String> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let want: Vec<String> =
        serde_json::from_str(&std::fs::read_to_string(fixture("filter10_k4.golden.json")).unwrap()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn simplex_then_sample_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let centers = dir.path().join("c.json");
    let samples = dir.path().join("s.json");
    run_ok(&["simplex", "--in", path_str(&fixture("base8.json")), "--n", "5", "--out", path_str(&centers)]);
    let file = EmbeddingFile::read(&centers).unwrap();
    assert_eq!(file.vectors.len(), 5);
    file.to_center_set().unwrap().verify(1e-9).unwrap();

    run_ok(&["sample", "--in", path_str(&centers), "--count", "2000", "--out", path_str(&samples)]);
    let s = EmbeddingFile::read(&samples).unwrap();
    assert_eq!(s.vectors.len(), 2000);
    assert!(s.components.as_ref().unwrap().iter().all(|&c| c < 5));

    let out = run_ok(&["check", "--kind", "samples", "--in", path_str(&samples), "--n", "5"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    let out = run_ok(&["check", "--kind", "centers", "--in", path_str(&centers)]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn zero_spread_samples_are_centers() {
    let dir = tempfile::tempdir().unwrap();
    let centers = dir.path().join("c.json");
    let samples = dir.path().join("s.json");
    run_ok(&["simplex", "--in", path_str(&fixture("base8.json")), "--n", "4", "--out", path_str(&centers)]);
    run_ok(&["sample", "--in", path_str(&centers), "--sigma-base", "0", "--count", "20", "--out", path_str(&samples)]);
    let c = EmbeddingFile::read(&centers).unwrap();
    let s = EmbeddingFile::read(&samples).unwrap();
    for (v, &k) in s.vectors.iter().zip(s.components.as_ref().unwrap()) {
        assert_eq!(v, &c.vectors[k]);
    }
}

#[test]
fn literal_mode_rejected_with_domain_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run([
        "simplex",
        "--in",
        path_str(&fixture("base8.json")),
        "--gamma-mode",
        "literal",
        "--out",
        path_str(&dir.path().join("c.json")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = error_of(&out);
    assert_eq!(err["error"], "negative_radicand");
    assert_eq!(err["exit_code"], 3);
    assert!(!dir.path().join("c.json").exists());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(["simplex"]).status.code(), Some(2));
    assert_eq!(run(["no-such-command"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out = run([
        "vendi",
        "--in",
        path_str(&fixture("identity7.json")),
        "--kernel",
        "rbf",
        "--lengthscale",
        "wide",
        "--out",
        path_str(&dir.path().join("v.json")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"], "usage");
}

#[test]
fn invalid_inputs_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 3, "vectors": [[1.0, 2.0]]}"#).unwrap();
    let out = run(["vendi", "--in", path_str(&bad), "--out", path_str(&dir.path().join("v.json"))]);
    assert_eq!(out.status.code(), Some(3));
    error_of(&out);

    let out = run(["filter", "--in", path_str(&fixture("records10.jsonl")), "--k", "11", "--out", path_str(&dir.path().join("k.json"))]);
    assert_eq!(out.status.code(), Some(3));

    let missing = dir.path().join("missing.json");
    let out = run(["chunk", "--in", path_str(&missing), "--out", path_str(&dir.path().join("c.json"))]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["error"], "io");
}

#[test]
fn chunk_window_too_large() {
    let dir = tempfile::tempdir().unwrap();
    let out = run([
        "chunk",
        "--in",
        path_str(&fixture("sentences.json")),
        "--window",
        "4",
        "--out",
        path_str(&dir.path().join("c.json")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["error"], "window");
}

#[test]
fn not_psd_kernel_exits_with_domain_code() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.json");
    std::fs::write(&k, r#"{"dim": 2, "vectors": [[1.0, 2.0], [2.0, 1.0]]}"#).unwrap();
    let out = run(["vendi", "--in", path_str(&k), "--kernel", "precomputed", "--out", path_str(&dir.path().join("v.json"))]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["error"], "not_psd");
}

#[test]
fn toy_entropy_table_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    run_ok(&["toy-entropy", "--out", path_str(&out), "--max-n", "3"]);
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,H_estimated,H_theoretical,vendi_300");
    assert_eq!(lines.len(), 4);
}

#[test]
fn toy_flow_train_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let report = dir.path().join("r.csv");
    run_ok(&["toy-flow", "train", "--out", path_str(&model), "--steps", "20", "--data-count", "300", "--cond-dim", "16"]);
    run_ok(&[
        "toy-flow", "eval", "--model", path_str(&model), "--out", path_str(&report),
        "--samples", "50", "--seed-sets", "2", "--n", "8",
    ]);
    let text = std::fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "method,code_specificity,seed_set,vendi,mean_dist,off_support_frac");
    assert_eq!(lines.len(), 1 + 3 * 2);
    let out = run(["toy-flow", "eval", "--model", path_str(&model), "--out", path_str(&report), "--cluster", "9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn balance_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let summary = dir.path().join("s.json");
    run_ok(&["balance", "--in", path_str(&fixture("records10.jsonl")), "--out", path_str(&csv), "--summary", path_str(&summary)]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "id,mean_similarity,balance,cover_spa,cover_sty");
    assert_eq!(text.lines().count(), 11);
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["records"], 10);
}

#[test]
fn help_shows_defaults() {
    let out = run_ok(&["sample", "--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[default: 0.25]"));
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = common::run_plan(a.path());
    let second = common::run_plan(b.path());
    assert_eq!(first.len(), second.len());
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        assert!(x == y, "{name} differs between runs");
    }
}

#[test]
fn unit_base_half_threshold_passes_checker() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("base.json");
    let centers = dir.path().join("c.json");
    std::fs::write(&base, r#"{"dim": 8, "vectors": [[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]]}"#).unwrap();
    run_ok(&["simplex", "--in", path_str(&base), "--n", "3", "--gamma-sim", "0.5", "--out", path_str(&centers)]);
    let out = run_ok(&["check", "--kind", "centers", "--in", path_str(&centers)]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert!((report["gamma_euc"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn large_sample_histogram_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let centers = dir.path().join("c.json");
    let samples = dir.path().join("s.json");
    run_ok(&["simplex", "--in", path_str(&fixture("base8.json")), "--n", "8", "--out", path_str(&centers)]);
    run_ok(&["sample", "--in", path_str(&centers), "--count", "100000", "--out", path_str(&samples)]);
    let out = run_ok(&["check", "--kind", "samples", "--in", path_str(&samples), "--n", "8"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn skewed_histogram_fails_check_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.json");
    let comps: Vec<String> = (0..400).map(|i| if i % 4 == 0 { "1" } else { "0" }.to_string()).collect();
    let vectors: Vec<&str> = (0..400).map(|_| "[0.0]").collect();
    std::fs::write(
        &samples,
        format!(r#"{{"dim": 1, "vectors": [{}], "components": [{}]}}"#, vectors.join(","), comps.join(",")),
    )
    .unwrap();
    let out = run(["check", "--kind", "samples", "--in", path_str(&samples), "--n", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn default_entropy_table_tracks_theory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    run_ok(&["toy-entropy", "--out", path_str(&out)]);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 10);
    for r in rows {
        assert!((r[1] - r[2]).abs() / r[1] < 0.01, "{r:?}");
    }
}

#[test]
fn high_dimensional_simplex_is_fast() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("base.json");
    let centers = dir.path().join("c.json");
    let v: Vec<String> = (0..4096).map(|i| format!("{}", ((i * 7919) % 200) as f64 / 100.0 - 1.0)).collect();
    std::fs::write(&base, format!(r#"{{"dim": 4096, "vectors": [[{}]]}}"#, v.join(","))).unwrap();
    let start = std::time::Instant::now();
    run_ok(&["simplex", "--in", path_str(&base), "--n", "50", "--out", path_str(&centers)]);
    let t = start.elapsed();
    println!("n=50 d=4096 simplex: {t:?}");
    assert!(t.as_secs_f64() < 1.0);
}
