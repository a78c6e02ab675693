//! Benchmark construction statistics: diversity-driven prompt filtering and
//! per-prompt spatial/stylistic balance and coverage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::EmbeddingVector;

/// Default density threshold for coverage.
pub const DEFAULT_TAU: f64 = 0.05;
/// Default count threshold for coverage.
pub const DEFAULT_K_MIN: usize = 5;
/// Default number of prompts kept per input file.
pub const DEFAULT_KEEP: usize = 40;

/// One benchmark prompt: aspect embeddings and token counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub id: String,
    pub semantic_emb: EmbeddingVector,
    pub spatial_emb: EmbeddingVector,
    pub stylistic_emb: EmbeddingVector,
    pub spa_count: usize,
    pub sty_count: usize,
    pub token_count: usize,
}

impl PromptRecord {
    pub fn validate(&self) -> Result<()> {
        let d = self.semantic_emb.dim();
        if self.spatial_emb.dim() != d || self.stylistic_emb.dim() != d {
            return Err(Error::Dimension(format!("record {}: aspect embeddings differ in dimension", self.id)));
        }
        if self.token_count == 0 {
            return Err(Error::Validation(format!("record {}: token_count must be positive", self.id)));
        }
        if self.spa_count + self.sty_count > self.token_count {
            return Err(Error::Validation(format!(
                "record {}: spa_count + sty_count exceeds token_count",
                self.id
            )));
        }
        for (name, e) in self.aspects() {
            if e.norm() == 0.0 {
                return Err(Error::Domain(format!("record {}: {name} embedding is zero", self.id)));
            }
        }
        Ok(())
    }

    fn aspects(&self) -> [(&'static str, &EmbeddingVector); 3] {
        [
            ("semantic", &self.semantic_emb),
            ("spatial", &self.spatial_emb),
            ("stylistic", &self.stylistic_emb),
        ]
    }
}

/// Concatenation of the ℓ2-normalized semantic, spatial and stylistic
/// embeddings; the result has norm √3.
pub fn prompt_feature(rec: &PromptRecord) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(3 * rec.semantic_emb.dim());
    for (name, e) in rec.aspects() {
        let norm = e.norm();
        if norm == 0.0 {
            return Err(Error::Domain(format!("record {}: {name} embedding is zero", rec.id)));
        }
        out.extend(e.as_slice().iter().map(|v| v / norm));
    }
    Ok(out)
}

/// Mean cosine similarity of each record to all others, returned in
/// ascending-id order alongside the ids.
pub fn mean_similarities(records: &[PromptRecord]) -> Result<Vec<(String, f64)>> {
    if records.len() < 2 {
        return Err(Error::Domain("need at least 2 records".into()));
    }
    let mut sorted: Vec<&PromptRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = sorted.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::Validation(format!("duplicate record id {:?}", w[0].id)));
    }
    let d = sorted[0].semantic_emb.dim();
    let mut feats = Vec::with_capacity(sorted.len());
    for r in &sorted {
        r.validate()?;
        if r.semantic_emb.dim() != d {
            return Err(Error::Dimension(format!("record {} has dimension {} (expected {d})", r.id, r.semantic_emb.dim())));
        }
        let f = prompt_feature(r)?;
        let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        feats.push(f.into_iter().map(|v| v / norm).collect::<Vec<f64>>());
    }
    let n = feats.len();
    let mut sums = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let s: f64 = feats[i].iter().zip(&feats[j]).map(|(a, b)| a * b).sum();
            sums[i] += s;
            sums[j] += s;
        }
    }
    Ok(sorted
        .iter()
        .zip(sums)
        .map(|(r, s)| (r.id.clone(), s / (n - 1) as f64))
        .collect())
}

/// Ids of the `keep` records least similar on average to the rest, ordered
/// by ascending mean similarity; ties go to the lexicographically smaller id.
pub fn filter_prompts(records: &[PromptRecord], keep: usize) -> Result<Vec<String>> {
    if keep < 1 || keep > records.len() {
        return Err(Error::Domain(format!("K = {keep} out of range 1..={}", records.len())));
    }
    let mut scored = mean_similarities(records)?;
    // Already id-sorted; a stable sort on the score keeps id order on ties.
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(scored.into_iter().take(keep).map(|(id, _)| id).collect())
}

/// Two-category entropy of spatial vs. stylistic density, normalized by
/// `log 2` into `[0, 1]`. Zero when both counts are zero.
pub fn balance_score(spa_count: usize, sty_count: usize, token_count: usize) -> f64 {
    if spa_count + sty_count == 0 || token_count == 0 {
        return 0.0;
    }
    let n = token_count as f64;
    let (d_spa, d_sty) = (spa_count as f64 / n, sty_count as f64 / n);
    let total = d_spa + d_sty;
    let h: f64 = [d_spa / total, d_sty / total]
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    h / std::f64::consts::LN_2
}

/// An aspect is covered when its density reaches `tau` or its count
/// reaches `k_min`.
pub fn coverage(count: usize, token_count: usize, tau: f64, k_min: usize) -> bool {
    if token_count == 0 {
        return count >= k_min;
    }
    count as f64 / token_count as f64 >= tau || count >= k_min
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordStats {
    pub id: String,
    pub mean_similarity: f64,
    pub balance: f64,
    pub cover_spa: bool,
    pub cover_sty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub records: usize,
    pub mean_balance: f64,
    pub spatial_coverage: f64,
    pub stylistic_coverage: f64,
}

/// Per-record statistics in ascending-id order.
pub fn record_stats(records: &[PromptRecord], tau: f64, k_min: usize) -> Result<Vec<RecordStats>> {
    let sims = mean_similarities(records)?;
    let mut sorted: Vec<&PromptRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(sorted
        .into_iter()
        .zip(sims)
        .map(|(r, (_, s))| RecordStats {
            id: r.id.clone(),
            mean_similarity: s,
            balance: balance_score(r.spa_count, r.sty_count, r.token_count),
            cover_spa: coverage(r.spa_count, r.token_count, tau, k_min),
            cover_sty: coverage(r.sty_count, r.token_count, tau, k_min),
        })
        .collect())
}

/// Dataset-level means of per-record balance and coverage indicators.
pub fn summarize(stats: &[RecordStats]) -> DatasetSummary {
    let n = stats.len().max(1) as f64;
    DatasetSummary {
        records: stats.len(),
        mean_balance: stats.iter().map(|s| s.balance).sum::<f64>() / n,
        spatial_coverage: stats.iter().filter(|s| s.cover_spa).count() as f64 / n,
        stylistic_coverage: stats.iter().filter(|s| s.cover_sty).count() as f64 / n,
    }
}
