//! Shared helpers for driving the command-line binary.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_promptmog")).args(args).output().expect("binary runs")
}

pub fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "promptmog {args:?} failed with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Every command-line invocation the determinism check reruns. Each entry
/// is (label, arguments, output files), with `{dir}/` marking paths inside
/// the output directory.
pub fn subcommand_plan() -> Vec<(&'static str, Vec<String>, Vec<&'static str>)> {
    let f = |n: &str| fixture(n).to_str().unwrap().to_string();
    let plan: Vec<(&'static str, Vec<String>, Vec<&'static str>)> = vec![
        ("simplex", vec!["simplex".into(), "--in".into(), f("base8.json"), "--out".into(), "{dir}/centers.json".into(), "--n".into(), "6".into(), "--seed".into(), "3".into()], vec!["centers.json"]),
        ("sample", vec!["sample".into(), "--in".into(), "{dir}/centers.json".into(), "--out".into(), "{dir}/samples.json".into(), "--count".into(), "600".into(), "--seed".into(), "4".into()], vec!["samples.json"]),
        ("vendi", vec!["vendi".into(), "--in".into(), "{dir}/samples.json".into(), "--in".into(), f("identity7.json"), "--out".into(), "{dir}/vendi.json".into(), "--kernel".into(), "cosine".into()], vec!["vendi.json"]),
        ("toy-entropy", vec!["toy-entropy".into(), "--out".into(), "{dir}/entropy.csv".into(), "--points-out".into(), "{dir}/entropy_points.csv".into(), "--max-n".into(), "4".into(), "--samples".into(), "100".into()], vec!["entropy.csv", "entropy_points.csv"]),
        ("toy-flow train", vec!["toy-flow".into(), "train".into(), "--out".into(), "{dir}/flow.json".into(), "--steps".into(), "40".into(), "--data-count".into(), "700".into(), "--cond-dim".into(), "64".into()], vec!["flow.json"]),
        ("toy-flow eval", vec!["toy-flow".into(), "eval".into(), "--model".into(), "{dir}/flow.json".into(), "--out".into(), "{dir}/flow_report.csv".into(), "--samples".into(), "60".into(), "--seed-sets".into(), "2".into(), "--n".into(), "10".into(), "--cluster".into(), "5".into()], vec!["flow_report.csv"]),
        ("chunk", vec!["chunk".into(), "--in".into(), f("sentences.json"), "--out".into(), "{dir}/chunk.json".into(), "--window".into(), "1".into(), "--dim".into(), "16".into()], vec!["chunk.json"]),
        ("filter", vec!["filter".into(), "--in".into(), f("records10.jsonl"), "--out".into(), "{dir}/kept.json".into(), "--k".into(), "4".into(), "--stats".into(), "{dir}/filter_stats.csv".into()], vec!["kept.json", "filter_stats.csv"]),
        ("balance", vec!["balance".into(), "--in".into(), f("records10.jsonl"), "--out".into(), "{dir}/balance.csv".into(), "--summary".into(), "{dir}/balance_summary.json".into()], vec!["balance.csv", "balance_summary.json"]),
        ("check", vec!["check".into(), "--kind".into(), "centers".into(), "--in".into(), "{dir}/centers.json".into(), "--out".into(), "{dir}/check_centers.json".into()], vec!["check_centers.json"]),
        ("check samples", vec!["check".into(), "--kind".into(), "samples".into(), "--in".into(), "{dir}/samples.json".into(), "--n".into(), "6".into(), "--out".into(), "{dir}/check_samples.json".into()], vec!["check_samples.json"]),
    ];
    plan
}

/// Runs the whole plan inside `dir` and returns the outputs as (file, bytes).
/// Outputs are addressed relative to `dir`, so recorded source paths match
/// across directories.
pub fn run_plan(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    for (label, args, outs) in subcommand_plan() {
        let args: Vec<String> = args.iter().map(|a| a.replace("{dir}/", "")).collect();
        let out = Command::new(env!("CARGO_BIN_EXE_promptmog"))
            .args(&args)
            .current_dir(dir)
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "{label} failed: {}", String::from_utf8_lossy(&out.stderr));
        for o in outs {
            files.push((o.to_string(), std::fs::read(dir.join(o)).expect("output written")));
        }
    }
    files
}
