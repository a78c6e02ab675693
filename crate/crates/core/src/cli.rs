//! Batch command-line front end.
//!
//! Every subcommand is a pure function of its flags and input files, so
//! reruns overwrite outputs with identical bytes. Failures print a JSON
//! object `{"error", "message", "exit_code"}` on stderr and exit with 2
//! (usage), 3 (domain or validation) or 4 (numerical failure).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::benchstats::{self, PromptRecord};
use crate::diversity::{self, FeatureSet, KernelMatrix, Lengthscale};
use crate::error::{Error, Result};
use crate::flow::{self, ExperimentConfig, Method, PromptMogParams, ToyDatasetSpec, ToyTask, TrainConfig};
use crate::geometry::{self, GammaMode};
use crate::io::{format_f64, EmbeddingFile};
use crate::mog::{self, MogModel};
use crate::rng;
use crate::textproxy::{self, MockEncoder};

#[derive(Debug, Parser)]
#[command(name = "promptmog", version, about = "Mixture-of-Gaussians prompt-embedding sampling and diversity tooling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Place n simplex-separated centers around a base embedding.
    Simplex(SimplexArgs),
    /// Draw embeddings from the mixture around a center file.
    Sample(SampleArgs),
    /// Vendi Score of one or more feature files.
    Vendi(VendiArgs),
    /// 1D mixture entropy vs. component count, with Vendi Scores (CSV).
    ToyEntropy(ToyEntropyArgs),
    /// Train or evaluate the toy conditional rectified flow.
    ToyFlow {
        #[command(subcommand)]
        action: ToyFlowAction,
    },
    /// Chunk-averaged embedding of a sentence list.
    Chunk(ChunkArgs),
    /// Select the least mutually similar prompt records.
    Filter(FilterArgs),
    /// Per-record balance and coverage statistics (CSV).
    Balance(BalanceArgs),
    /// Verify the invariants of a center or sample file.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct SimplexArgs {
    /// Base embedding file (exactly one vector).
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Number of centers.
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Cosine-similarity threshold converted to the Euclidean radius.
    #[arg(long, default_value_t = 0.7)]
    pub gamma_sim: f64,
    #[arg(long, value_enum, default_value_t = GammaMode::Standard)]
    pub gamma_mode: GammaMode,
    /// Explicit Euclidean radius; overrides --gamma-sim.
    #[arg(long)]
    pub gamma_euc: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Center file written by `simplex`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Spread factor; sigma = sigma_base * gamma_euc / sqrt(d). Zero gives the centers themselves.
    #[arg(long, default_value_t = 0.25)]
    pub sigma_base: f64,
    /// Number of embeddings (one per generation seed).
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Cosine,
    Rbf,
    /// The input vectors are the kernel matrix itself.
    Precomputed,
}

impl KernelKind {
    fn name(self) -> &'static str {
        match self {
            KernelKind::Cosine => "cosine",
            KernelKind::Rbf => "rbf",
            KernelKind::Precomputed => "precomputed",
        }
    }
}

#[derive(Debug, Args)]
pub struct VendiArgs {
    /// Feature files (one per prompt); repeat for several.
    #[arg(long = "in", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = KernelKind::Cosine)]
    pub kernel: KernelKind,
    /// RBF lengthscale: a positive number or `median`.
    #[arg(long, default_value = "median")]
    pub lengthscale: String,
}

#[derive(Debug, Args)]
pub struct ToyEntropyArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Component spacing in units of sigma.
    #[arg(long, default_value_t = 6.0)]
    pub delta_factor: f64,
    /// Samples per n for the Vendi Score.
    #[arg(long, default_value_t = 300)]
    pub samples: usize,
    /// Optional CSV of the drawn samples (n, component, x).
    #[arg(long)]
    pub points_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum ToyFlowAction {
    /// Train the velocity field and write a checkpoint.
    Train(ToyTrainArgs),
    /// Compare baseline and mixture sampling; write the report CSV.
    Eval(ToyEvalArgs),
}

#[derive(Debug, Args)]
pub struct ToyTrainArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 20_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 256)]
    pub batch: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 20_000)]
    pub data_count: usize,
    #[arg(long, default_value_t = 8)]
    pub clusters: usize,
    #[arg(long, default_value_t = 0.05)]
    pub cluster_std: f64,
    #[arg(long, default_value_t = 512)]
    pub cond_dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ToyEvalArgs {
    /// Checkpoint written by `toy-flow train`.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Fine-code cluster to evaluate.
    #[arg(long, default_value_t = 0)]
    pub cluster: usize,
    #[arg(long, default_value_t = 300)]
    pub samples: usize,
    #[arg(long, default_value_t = 5)]
    pub seed_sets: u64,
    /// Euler steps.
    #[arg(long, default_value_t = 28)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.7)]
    pub gamma_sim: f64,
    #[arg(long, default_value_t = 0.25)]
    pub sigma_base: f64,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = GammaMode::Standard)]
    pub gamma_mode: GammaMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ChunkArgs {
    /// JSON array of sentences.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub window: usize,
    /// Mock encoder dimension.
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// JSON-lines file of prompt records.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Number of records to keep.
    #[arg(long, default_value_t = benchstats::DEFAULT_KEEP)]
    pub k: usize,
    /// Optional per-record statistics CSV.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Optional dataset summary JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long, default_value_t = benchstats::DEFAULT_TAU)]
    pub tau: f64,
    #[arg(long, default_value_t = benchstats::DEFAULT_K_MIN)]
    pub k_min: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Centers,
    Samples,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub kind: CheckKind,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Optional JSON report path (otherwise stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative tolerance for center invariants.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Component count for the uniformity check (defaults to max index + 1).
    #[arg(long)]
    pub n: Option<usize>,
}

/// Parses `std::env::args`, runs, and returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            e.exit_code()
        }
    }
}

pub fn error_json(e: &Error) -> String {
    serde_json::json!({ "error": e.code(), "message": e.to_string(), "exit_code": e.exit_code() }).to_string()
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Simplex(a) => cmd_simplex(&a),
        Command::Sample(a) => cmd_sample(&a),
        Command::Vendi(a) => cmd_vendi(&a),
        Command::ToyEntropy(a) => cmd_toy_entropy(&a),
        Command::ToyFlow { action: ToyFlowAction::Train(a) } => cmd_toy_train(&a),
        Command::ToyFlow { action: ToyFlowAction::Eval(a) } => cmd_toy_eval(&a),
        Command::Chunk(a) => cmd_chunk(&a),
        Command::Filter(a) => cmd_filter(&a),
        Command::Balance(a) => cmd_balance(&a),
        Command::Check(a) => cmd_check(&a),
    }
}

pub fn cmd_simplex(a: &SimplexArgs) -> Result<()> {
    let base = EmbeddingFile::read(&a.input)?.single()?;
    let gamma_euc = match a.gamma_euc {
        Some(g) => g,
        None => geometry::gamma_sim_to_euc(a.gamma_sim, base.norm(), a.gamma_mode)?,
    };
    let frame = geometry::simplex_directions(a.n, base.dim())?;
    let seed: u64 = rand::Rng::random(&mut rng::substream(a.seed, "rotation"));
    let centers = geometry::place_centers(&base, &frame, gamma_euc, seed)?;
    EmbeddingFile::from_centers(&centers).write(&a.out)
}

pub fn cmd_sample(a: &SampleArgs) -> Result<()> {
    let centers = EmbeddingFile::read(&a.input)?.to_center_set()?;
    let model = if a.sigma_base == 0.0 {
        MogModel::new(centers.centers.clone(), 0.0)?
    } else {
        mog::build_mog(&centers, a.sigma_base)?
    };
    let mut r = rng::substream(a.seed, "mog");
    let (vectors, components): (Vec<Vec<f64>>, Vec<usize>) = (0..a.count)
        .map(|_| {
            let (e, k) = mog::sample_mog(&model, &mut r);
            (e.into_inner(), k)
        })
        .unzip();
    let file = EmbeddingFile { dim: model.dim(), vectors, base: None, gamma_euc: None, components: Some(components) };
    file.write(&a.out)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VendiRecord {
    pub source: String,
    pub score: f64,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VendiOutput {
    pub kernel: String,
    pub mean_score: f64,
    pub results: Vec<VendiRecord>,
}

pub fn parse_lengthscale(s: &str) -> Result<Lengthscale> {
    if s == "median" {
        return Ok(Lengthscale::Median);
    }
    let v: f64 = s.parse().map_err(|_| Error::Usage(format!("lengthscale must be a number or `median`, got {s:?}")))?;
    Ok(Lengthscale::Fixed(v))
}

pub fn cmd_vendi(a: &VendiArgs) -> Result<()> {
    let lengthscale = parse_lengthscale(&a.lengthscale)?;
    let mut results = Vec::with_capacity(a.inputs.len());
    for path in &a.inputs {
        let file = EmbeddingFile::read(path)?;
        let fs = FeatureSet::from_rows(&file.vectors)?;
        let kernel = match a.kernel {
            KernelKind::Cosine => diversity::cosine_kernel(&fs)?,
            KernelKind::Rbf => diversity::rbf_kernel(&fs, lengthscale)?,
            KernelKind::Precomputed => KernelMatrix::new(fs.features().clone())?,
        };
        let r = diversity::vendi(&kernel)?;
        results.push(VendiRecord { source: path.display().to_string(), score: r.score, eigenvalues: r.eigenvalues });
    }
    let mean_score = results.iter().map(|r| r.score).sum::<f64>() / results.len() as f64;
    write_json(&a.out, &VendiOutput { kernel: a.kernel.name().into(), mean_score, results })
}

/// One row of the entropy-vs-components table.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub n: usize,
    pub h_estimated: f64,
    pub h_theoretical: f64,
    pub vendi: f64,
}

/// One drawn toy sample: (n, component, x).
pub type ToyPoint = (usize, usize, f64);

/// Quadrature entropy and sample Vendi Score (RBF, lengthscale σ) for
/// `n = 1..=max_n` components spaced `delta_factor·σ` apart.
pub fn toy_entropy_table(
    max_n: usize,
    sigma: f64,
    delta_factor: f64,
    samples: usize,
    seed: u64,
) -> Result<(Vec<EntropyRow>, Vec<ToyPoint>)> {
    if max_n == 0 || samples == 0 {
        return Err(Error::Domain("max_n and samples must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(max_n);
    let mut points = Vec::new();
    for n in 1..=max_n {
        let report = mog::mog_entropy_1d(n, sigma, delta_factor * sigma)?;
        let means: Vec<f64> = (0..n).map(|k| k as f64 * delta_factor * sigma).collect();
        let model = MogModel::from_means_1d(&means, sigma)?;
        let mut r = rng::indexed_substream(seed, "toy-entropy", n as u64);
        let mut xs = Vec::with_capacity(samples);
        for _ in 0..samples {
            let (x, k) = mog::sample_mog(&model, &mut r);
            xs.push(vec![x.as_slice()[0]]);
            points.push((n, k, x.as_slice()[0]));
        }
        let kernel = diversity::rbf_kernel(&FeatureSet::from_rows(&xs)?, Lengthscale::Fixed(sigma))?;
        rows.push(EntropyRow {
            n,
            h_estimated: report.h_mix,
            h_theoretical: report.theoretical,
            vendi: diversity::vendi_score(&kernel)?,
        });
    }
    Ok((rows, points))
}

pub fn cmd_toy_entropy(a: &ToyEntropyArgs) -> Result<()> {
    let (rows, points) = toy_entropy_table(a.max_n, a.sigma, a.delta_factor, a.samples, a.seed)?;
    let mut csv = format!("n,H_estimated,H_theoretical,vendi_{}\n", a.samples);
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{}", r.n, format_f64(r.h_estimated), format_f64(r.h_theoretical), format_f64(r.vendi));
    }
    std::fs::write(&a.out, csv)?;
    if let Some(p) = &a.points_out {
        let mut csv = String::from("n,component,x\n");
        for (n, k, x) in points {
            let _ = writeln!(csv, "{n},{k},{}", format_f64(x));
        }
        std::fs::write(p, csv)?;
    }
    Ok(())
}

pub fn cmd_toy_train(a: &ToyTrainArgs) -> Result<()> {
    let spec = ToyDatasetSpec {
        cluster_count: a.clusters,
        radius: 1.0,
        cluster_std: a.cluster_std,
        cond_dim: a.cond_dim,
        seed: a.seed,
    };
    let task = ToyTask::new(spec)?;
    let data = flow::make_dataset(&task, a.data_count, &mut rng::substream(a.seed, "data"))?;
    let mut config = TrainConfig { steps: a.steps, batch_size: a.batch, ..Default::default() };
    config.adam.lr = a.lr;
    let model = flow::train_velocity_field(&data, &config, &mut rng::substream(a.seed, "train"))?;
    flow::write_checkpoint(&model, Some(&spec), &a.out)
}

pub fn cmd_toy_eval(a: &ToyEvalArgs) -> Result<()> {
    let (model, spec) = flow::read_checkpoint(&a.model)?;
    let spec = spec.ok_or_else(|| Error::Validation("checkpoint carries no dataset description".into()))?;
    let task = ToyTask::new(spec)?;
    if a.cluster >= spec.cluster_count {
        return Err(Error::Domain(format!("cluster {} out of range (0..{})", a.cluster, spec.cluster_count)));
    }
    let mut config = ExperimentConfig::new(a.seed, (0..a.seed_sets).collect(), spec.cluster_std);
    config.samples = a.samples;
    config.euler_steps = a.steps;
    let fine = task.fine_code(a.cluster);
    let coarse = task.coarse_code(task.sector_of(a.cluster));
    let params = PromptMogParams { gamma_sim: a.gamma_sim, sigma_base: a.sigma_base, n: a.n, mode: a.gamma_mode };
    let runs = [
        flow::diversity_experiment(&model, &task, &coarse, Method::Baseline, &config)?,
        flow::diversity_experiment(&model, &task, &fine, Method::Baseline, &config)?,
        flow::diversity_experiment(&model, &task, &fine, Method::PromptMog(params), &config)?,
    ];
    let mut csv = format!("{}\n", flow::experiment::REPORT_CSV_HEADER);
    for r in &runs {
        for line in r.csv_rows() {
            csv.push_str(&line);
            csv.push('\n');
        }
    }
    std::fs::write(&a.out, csv)?;
    Ok(())
}

pub fn cmd_chunk(a: &ChunkArgs) -> Result<()> {
    let sentences: Vec<String> = serde_json::from_str(&std::fs::read_to_string(&a.input)?)?;
    let encoder = MockEncoder::new(a.dim, a.seed)?;
    let e = textproxy::chunk_embedding(&encoder, &sentences, a.window)?;
    EmbeddingFile::from_embedding(&e).write(&a.out)
}

pub fn read_records(path: &Path) -> Result<Vec<PromptRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: PromptRecord = serde_json::from_str(line)
            .map_err(|e| Error::Validation(format!("line {}: {e}", i + 1)))?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

fn stats_csv(stats: &[benchstats::RecordStats]) -> String {
    let mut csv = String::from("id,mean_similarity,balance,cover_spa,cover_sty\n");
    for s in stats {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            csv_field(&s.id),
            format_f64(s.mean_similarity),
            format_f64(s.balance),
            u8::from(s.cover_spa),
            u8::from(s.cover_sty)
        );
    }
    csv
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn cmd_filter(a: &FilterArgs) -> Result<()> {
    let records = read_records(&a.input)?;
    let ids = benchstats::filter_prompts(&records, a.k)?;
    write_json(&a.out, &ids)?;
    if let Some(p) = &a.stats {
        let stats = benchstats::record_stats(&records, benchstats::DEFAULT_TAU, benchstats::DEFAULT_K_MIN)?;
        std::fs::write(p, stats_csv(&stats))?;
    }
    Ok(())
}

pub fn cmd_balance(a: &BalanceArgs) -> Result<()> {
    let records = read_records(&a.input)?;
    let stats = benchstats::record_stats(&records, a.tau, a.k_min)?;
    std::fs::write(&a.out, stats_csv(&stats))?;
    if let Some(p) = &a.summary {
        write_json(p, &benchstats::summarize(&stats))?;
    }
    Ok(())
}

/// Upper 0.999 quantile of the chi-square distribution (Wilson–Hilferty).
pub fn chi_square_999(df: usize) -> f64 {
    const Z_999: f64 = 3.090_232_306_167_813;
    let k = df as f64;
    let a = 2.0 / (9.0 * k);
    k * (1.0 - a + Z_999 * a.sqrt()).powi(3)
}

#[derive(Debug, Serialize)]
struct CheckReport {
    kind: &'static str,
    passed: bool,
    #[serde(flatten)]
    detail: serde_json::Value,
}

pub fn cmd_check(a: &CheckArgs) -> Result<()> {
    let file = EmbeddingFile::read(&a.input)?;
    let (report, failure) = match a.kind {
        CheckKind::Centers => {
            let cs = file.to_center_set()?;
            let dev = cs.deviations();
            let passed = dev.radius <= a.tol && dev.inner_product <= a.tol;
            let detail = serde_json::json!({
                "n": cs.n(), "dim": cs.dim(), "gamma_euc": cs.gamma_euc,
                "radius_deviation": dev.radius, "inner_product_deviation": dev.inner_product, "tolerance": a.tol,
            });
            let failure = (!passed).then(|| cs.verify(a.tol).err()).flatten();
            (CheckReport { kind: "centers", passed, detail }, failure)
        }
        CheckKind::Samples => {
            let comps = file
                .components
                .as_ref()
                .ok_or_else(|| Error::Validation("sample file lacks \"components\"".into()))?;
            let n = a.n.unwrap_or_else(|| comps.iter().max().map_or(1, |m| m + 1));
            if n < 2 || comps.iter().any(|&c| c >= n) {
                return Err(Error::Validation(format!("components must lie in 0..{n} with n >= 2")));
            }
            let mut counts = vec![0usize; n];
            for &c in comps {
                counts[c] += 1;
            }
            let expected = comps.len() as f64 / n as f64;
            let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
            let threshold = chi_square_999(n - 1);
            let passed = chi2 < threshold;
            let detail = serde_json::json!({
                "n": n, "count": comps.len(), "chi_square": chi2, "threshold_0999": threshold,
            });
            let failure = (!passed).then(|| Error::Validation(format!("component histogram fails uniformity: chi2 {chi2} >= {threshold}")));
            (CheckReport { kind: "samples", passed, detail }, failure)
        }
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &a.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    failure.map_or(Ok(()), Err)
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_quantile_approximation() {
        // Tabulated 0.999 quantiles.
        assert!((chi_square_999(49) - 85.351).abs() < 0.2);
        assert!((chi_square_999(7) - 24.322).abs() / 24.322 < 0.01);
    }

    #[test]
    fn help_lists_defaults() {
        use clap::CommandFactory;
        let mut cmd = Cli::command();
        let simplex = cmd.find_subcommand_mut("simplex").unwrap().render_long_help().to_string();
        assert!(simplex.contains("[default: 0.7]") && simplex.contains("[default: 50]"));
        let sample = cmd.find_subcommand_mut("sample").unwrap().render_long_help().to_string();
        assert!(sample.contains("[default: 0.25]"));
        let flow = cmd.find_subcommand_mut("toy-flow").unwrap();
        let eval = flow.find_subcommand_mut("eval").unwrap().render_long_help().to_string();
        assert!(eval.contains("[default: 28]") && eval.contains("[default: 0.7]") && eval.contains("[default: 50]"));
    }

    #[test]
    fn lengthscale_parsing() {
        assert_eq!(parse_lengthscale("median").unwrap(), Lengthscale::Median);
        assert_eq!(parse_lengthscale("0.5").unwrap(), Lengthscale::Fixed(0.5));
        assert!(matches!(parse_lengthscale("wide"), Err(Error::Usage(_))));
    }
}
