//! Diversity of flow samples under a fixed code versus mixture-sampled codes.

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::dataset::{ConditioningCode, ToyTask};
use super::model::{euler_integrate, VelocityField};
use crate::diversity::{rbf_kernel, vendi_score, FeatureSet, Lengthscale};
use crate::error::{Error, Result};
use crate::geometry::{gamma_sim_to_euc, place_centers, simplex_directions, EmbeddingVector, GammaMode};
use crate::mog::{build_mog, sample_mog};
use crate::rng;

/// Mixture settings: cosine threshold, spread factor and component count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PromptMogParams {
    pub gamma_sim: f64,
    pub sigma_base: f64,
    pub n: usize,
    pub mode: GammaMode,
}

impl Default for PromptMogParams {
    fn default() -> Self {
        Self { gamma_sim: 0.7, sigma_base: 0.25, n: 50, mode: GammaMode::Standard }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Method {
    Baseline,
    PromptMog(PromptMogParams),
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::PromptMog(_) => "promptmog",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub samples: usize,
    pub euler_steps: usize,
    pub seed: u64,
    pub seed_sets: Vec<u64>,
    pub lengthscale: Lengthscale,
    /// Off-support radius in units of the cluster standard deviation.
    pub support_radius: f64,
}

impl ExperimentConfig {
    pub fn new(seed: u64, seed_sets: Vec<u64>, cluster_std: f64) -> Self {
        Self {
            samples: 300,
            euler_steps: 28,
            seed,
            seed_sets,
            lengthscale: Lengthscale::Fixed(cluster_std),
            support_radius: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedSetReport {
    pub seed_set: u64,
    pub vendi: f64,
    pub mean_dist: f64,
    pub off_support_frac: f64,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub method: String,
    pub specificity: String,
    pub rows: Vec<SeedSetReport>,
}

impl ExperimentReport {
    pub fn mean_vendi(&self) -> f64 {
        self.rows.iter().map(|r| r.vendi).sum::<f64>() / self.rows.len() as f64
    }

    pub fn mean_off_support(&self) -> f64 {
        self.rows.iter().map(|r| r.off_support_frac).sum::<f64>() / self.rows.len() as f64
    }

    pub fn max_off_support(&self) -> f64 {
        self.rows.iter().map(|r| r.off_support_frac).fold(0.0, f64::max)
    }

    /// CSV rows `method,code_specificity,seed_set,vendi,mean_dist,off_support_frac`.
    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    self.method,
                    self.specificity,
                    r.seed_set,
                    crate::io::format_f64(r.vendi),
                    crate::io::format_f64(r.mean_dist),
                    crate::io::format_f64(r.off_support_frac)
                )
            })
            .collect()
    }
}

pub const REPORT_CSV_HEADER: &str = "method,code_specificity,seed_set,vendi,mean_dist,off_support_frac";

/// Generates `samples` points per seed set and scores their diversity and
/// fidelity to the clusters `base_code` admits.
///
/// Under the mixture method each generation draws its own conditioning
/// vector from the mixture around `base_code` before denoising. Noise and
/// mixture draws use separate streams, so the two methods see identical
/// initial noise for a given seed set.
pub fn diversity_experiment<F: VelocityField + ?Sized>(
    model: &F,
    task: &ToyTask,
    base_code: &ConditioningCode,
    method: Method,
    config: &ExperimentConfig,
) -> Result<ExperimentReport> {
    if config.samples < 50 {
        return Err(Error::Domain(format!("need at least 50 samples, got {}", config.samples)));
    }
    if config.seed_sets.is_empty() {
        return Err(Error::Domain("need at least one seed set".into()));
    }
    let dim = base_code.values.len();
    if dim != model.cond_dim() {
        return Err(Error::Dimension(format!("code has dimension {dim}, model expects {}", model.cond_dim())));
    }
    let base = EmbeddingVector::new(base_code.values.clone())?;
    let radius = config.support_radius * task.spec().cluster_std;
    let mut rows = Vec::with_capacity(config.seed_sets.len());
    for &set in &config.seed_sets {
        let mut noise = rng::indexed_substream(config.seed, "noise", set);
        let x1 = DMatrix::from_fn(config.samples, 2, |_, _| StandardNormal.sample(&mut noise));
        let mut cond = DMatrix::zeros(config.samples, dim);
        match method {
            Method::Baseline => {
                for i in 0..config.samples {
                    cond.row_mut(i).copy_from_slice(&base_code.values);
                }
            }
            Method::PromptMog(p) => {
                let gamma_euc = gamma_sim_to_euc(p.gamma_sim, base.norm(), p.mode)?;
                let frame = simplex_directions(p.n, dim)?;
                let rotation_seed: u64 = rng::indexed_substream(config.seed, "rotation", set).random();
                let centers = place_centers(&base, &frame, gamma_euc, rotation_seed)?;
                let mog = build_mog(&centers, p.sigma_base)?;
                let mut draws = rng::indexed_substream(config.seed, "mog", set);
                for i in 0..config.samples {
                    let (e, _) = sample_mog(&mog, &mut draws);
                    cond.row_mut(i).copy_from_slice(e.as_slice());
                }
            }
        }
        let x0 = euler_integrate(model, &x1, &cond, config.euler_steps)?;
        let points: Vec<[f64; 2]> = (0..config.samples).map(|i| [x0[(i, 0)], x0[(i, 1)]]).collect();
        let dists: Vec<f64> = points.iter().map(|&p| task.distance_to_nearest(p, &base_code.clusters)).collect();
        let fs = FeatureSet::new(x0)?;
        let vendi = vendi_score(&rbf_kernel(&fs, config.lengthscale)?)?;
        rows.push(SeedSetReport {
            seed_set: set,
            vendi,
            mean_dist: dists.iter().sum::<f64>() / dists.len() as f64,
            off_support_frac: dists.iter().filter(|&&d| d > radius).count() as f64 / dists.len() as f64,
            points,
        });
    }
    Ok(ExperimentReport {
        method: method.label().into(),
        specificity: base_code.specificity.as_str().into(),
        rows,
    })
}
