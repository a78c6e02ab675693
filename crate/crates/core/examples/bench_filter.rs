//! Diversity filtering and balance statistics on a small synthetic prompt set.

use promptmog::benchstats::{self, PromptRecord};
use promptmog::geometry::EmbeddingVector;
use promptmog::rng;
use rand::Rng as _;

fn random_unit(r: &mut promptmog::rng::Rng, dim: usize) -> promptmog::Result<EmbeddingVector> {
    EmbeddingVector::new((0..dim).map(|_| r.random_range(-1.0..1.0)).collect())
}

pub fn run_example() -> promptmog::Result<Vec<String>> {
    let mut r = rng::substream(5, "example-records");
    let mut records = Vec::new();
    for i in 0..12 {
        let token_count = r.random_range(20..80);
        let spa_count = r.random_range(0..token_count / 3);
        let sty_count = r.random_range(0..token_count / 3);
        records.push(PromptRecord {
            id: format!("p{i:02}"),
            semantic_emb: random_unit(&mut r, 16)?,
            spatial_emb: random_unit(&mut r, 16)?,
            stylistic_emb: random_unit(&mut r, 16)?,
            spa_count,
            sty_count,
            token_count,
        });
    }
    let kept = benchstats::filter_prompts(&records, 5)?;
    println!("kept {kept:?}");

    let stats = benchstats::record_stats(&records, benchstats::DEFAULT_TAU, benchstats::DEFAULT_K_MIN)?;
    for s in &stats {
        println!(
            "{}  mean_sim {:+.4}  balance {:.4}  spa {}  sty {}",
            s.id, s.mean_similarity, s.balance, s.cover_spa, s.cover_sty
        );
    }
    let summary = benchstats::summarize(&stats);
    println!("{summary:?}");
    Ok(kept)
}

#[allow(dead_code)]
fn main() -> promptmog::Result<()> {
    run_example().map(|_| ())
}
