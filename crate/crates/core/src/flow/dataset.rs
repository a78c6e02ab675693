//! Synthetic conditional data: Gaussian clusters on a ring, with
//! conditioning codes built from seeded attribute embeddings.
//!
//! Clusters split into two sectors of `cluster_count / 2`. A coarse code
//! names only the sector; a fine code adds the position within the sector
//! and so names exactly one cluster.

use std::f64::consts::TAU;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToyDatasetSpec {
    pub cluster_count: usize,
    pub radius: f64,
    pub cluster_std: f64,
    pub cond_dim: usize,
    pub seed: u64,
}

impl Default for ToyDatasetSpec {
    fn default() -> Self {
        Self { cluster_count: 8, radius: 1.0, cluster_std: 0.05, cond_dim: 512, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Specificity {
    Coarse,
    Fine,
}

impl Specificity {
    pub fn as_str(self) -> &'static str {
        match self {
            Specificity::Coarse => "coarse",
            Specificity::Fine => "fine",
        }
    }
}

/// A conditioning vector together with the clusters it admits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditioningCode {
    pub values: Vec<f64>,
    pub specificity: Specificity,
    pub clusters: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToySample {
    pub point: [f64; 2],
    pub cluster: usize,
    pub fine: ConditioningCode,
    pub coarse: ConditioningCode,
}

/// The generating process: cluster geometry plus attribute embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyTask {
    spec: ToyDatasetSpec,
    sector_attrs: Vec<Vec<f64>>,
    position_attrs: Vec<Vec<f64>>,
}

impl ToyTask {
    pub fn new(spec: ToyDatasetSpec) -> Result<Self> {
        if spec.cluster_count < 2 || !spec.cluster_count.is_multiple_of(2) {
            return Err(Error::Domain(format!("cluster_count must be even and >= 2, got {}", spec.cluster_count)));
        }
        if !(spec.cluster_std >= 0.0) || !(spec.radius > 0.0) || spec.cond_dim == 0 {
            return Err(Error::Domain("need radius > 0, cluster_std >= 0 and cond_dim >= 1".into()));
        }
        let mut r = rng::substream(spec.seed, "attributes");
        // Entries ~ N(0, 1/cond_dim), so each attribute has norm close to 1.
        let scale = 1.0 / (spec.cond_dim as f64).sqrt();
        let attr = |r: &mut Rng| -> Vec<f64> {
            (0..spec.cond_dim)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(r);
                    scale * z
                })
                .collect()
        };
        let sector_attrs = (0..2).map(|_| attr(&mut r)).collect();
        let position_attrs = (0..spec.cluster_count / 2).map(|_| attr(&mut r)).collect();
        Ok(Self { spec, sector_attrs, position_attrs })
    }

    pub fn spec(&self) -> &ToyDatasetSpec {
        &self.spec
    }

    pub fn sector_size(&self) -> usize {
        self.spec.cluster_count / 2
    }

    pub fn sector_of(&self, cluster: usize) -> usize {
        cluster / self.sector_size()
    }

    pub fn cluster_center(&self, cluster: usize) -> [f64; 2] {
        let angle = TAU * cluster as f64 / self.spec.cluster_count as f64;
        [self.spec.radius * angle.cos(), self.spec.radius * angle.sin()]
    }

    pub fn fine_code(&self, cluster: usize) -> ConditioningCode {
        let s = self.sector_of(cluster);
        let p = cluster % self.sector_size();
        ConditioningCode {
            values: self.sector_attrs[s].iter().zip(&self.position_attrs[p]).map(|(a, b)| a + b).collect(),
            specificity: Specificity::Fine,
            clusters: vec![cluster],
        }
    }

    pub fn coarse_code(&self, sector: usize) -> ConditioningCode {
        let size = self.sector_size();
        ConditioningCode {
            values: self.sector_attrs[sector].clone(),
            specificity: Specificity::Coarse,
            clusters: (sector * size..(sector + 1) * size).collect(),
        }
    }

    /// Distance from `point` to the nearest center among `clusters`.
    pub fn distance_to_nearest(&self, point: [f64; 2], clusters: &[usize]) -> f64 {
        clusters
            .iter()
            .map(|&k| {
                let c = self.cluster_center(k);
                ((point[0] - c[0]).powi(2) + (point[1] - c[1]).powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// `count` points with uniformly drawn clusters.
pub fn make_dataset(task: &ToyTask, count: usize, rng: &mut Rng) -> Result<Vec<ToySample>> {
    if count == 0 {
        return Err(Error::Domain("dataset count must be >= 1".into()));
    }
    let std = task.spec.cluster_std;
    Ok((0..count)
        .map(|_| {
            let k = rng.random_range(0..task.spec.cluster_count);
            let c = task.cluster_center(k);
            let z: [f64; 2] = [StandardNormal.sample(rng), StandardNormal.sample(rng)];
            ToySample {
                point: [c[0] + std * z[0], c[1] + std * z[1]],
                cluster: k,
                fine: task.fine_code(k),
                coarse: task.coarse_code(task.sector_of(k)),
            }
        })
        .collect())
}
