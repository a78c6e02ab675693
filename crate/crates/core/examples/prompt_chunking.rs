//! Chunk-averaged embedding of a long prompt with the deterministic mock
//! encoder.

use promptmog::textproxy::{self, Encoder, MockEncoder};

pub fn run_example() -> promptmog::Result<(Vec<f64>, f64)> {
    let sentences = [
        "A lighthouse on a rocky coast.",
        "Waves break against the cliffs below.",
        "The sky is heavy with storm clouds.",
        "A single window glows in the tower.",
        "Painted in thick impasto brushstrokes.",
    ];
    let encoder = MockEncoder::new(32, 3)?;
    let whole = encoder.encode(&sentences)?;
    let chunked = textproxy::chunk_embedding(&encoder, &sentences, 2)?;
    let cos: f64 = whole.as_slice().iter().zip(chunked.as_slice()).map(|(a, b)| a * b).sum::<f64>()
        / (whole.norm() * chunked.norm());

    println!("sentences        {}", sentences.len());
    println!("window weights   {:?}", textproxy::chunk_weights(sentences.len(), 2)?);
    println!("cos(whole, chunked) {cos:.6}");
    Ok((textproxy::chunk_weights(sentences.len(), 2)?, cos))
}

#[allow(dead_code)]
fn main() -> promptmog::Result<()> {
    run_example().map(|_| ())
}
