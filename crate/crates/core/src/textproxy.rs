//! Prompt chunking: emulate short-prompt conditioning by averaging encoder
//! embeddings of overlapping sentence windows.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::EmbeddingVector;
use crate::rng;

/// Maps a sequence of sentences to a fixed-dimension embedding.
pub trait Encoder {
    fn dim(&self) -> usize;
    fn encode(&self, sentences: &[&str]) -> Result<EmbeddingVector>;
}

/// Deterministic stand-in for a text encoder.
///
/// Each sentence hashes to a seeded standard-normal vector; a sequence
/// encodes to the ℓ2-normalized mean of its sentence vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MockEncoder {
    dim: usize,
    seed: u64,
}

impl MockEncoder {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("encoder dimension must be >= 1".into()));
        }
        Ok(Self { dim, seed })
    }

    /// Unnormalized Gaussian vector for one sentence.
    pub fn sentence_vector(&self, sentence: &str) -> Vec<f64> {
        let mut r = rng::keyed_substream(self.seed, "sentence", sentence.as_bytes());
        (0..self.dim).map(|_| StandardNormal.sample(&mut r)).collect()
    }
}

impl Encoder for MockEncoder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn encode(&self, sentences: &[&str]) -> Result<EmbeddingVector> {
        if sentences.is_empty() {
            return Err(Error::Domain("cannot encode an empty sentence list".into()));
        }
        let mut acc = vec![0.0; self.dim];
        for s in sentences {
            for (a, v) in acc.iter_mut().zip(self.sentence_vector(s)) {
                *a += v;
            }
        }
        let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Degenerate("sentence vectors cancel to zero".into()));
        }
        EmbeddingVector::new(acc.into_iter().map(|v| v / norm).collect())
    }
}

/// Mean of the `k - w` window embeddings, window `i` spanning sentences
/// `i..=i+w` (so every window holds `w + 1` sentences).
pub fn chunk_embedding<E, S>(encoder: &E, sentences: &[S], w: usize) -> Result<EmbeddingVector>
where
    E: Encoder + ?Sized,
    S: AsRef<str>,
{
    let k = sentences.len();
    if w < 1 || w >= k {
        return Err(Error::Window { window: w, sentences: k });
    }
    let chunks = k - w;
    let refs: Vec<&str> = sentences.iter().map(AsRef::as_ref).collect();
    let mut acc = vec![0.0; encoder.dim()];
    for i in 0..chunks {
        let e = encoder.encode(&refs[i..=i + w])?;
        if e.dim() != acc.len() {
            return Err(Error::Dimension(format!(
                "encoder returned dimension {} (declared {})",
                e.dim(),
                acc.len()
            )));
        }
        for (a, v) in acc.iter_mut().zip(e.as_slice()) {
            *a += v;
        }
    }
    EmbeddingVector::new(acc.into_iter().map(|v| v / chunks as f64).collect())
}

/// Weight each sentence receives in the chunked output when the encoder is
/// the plain mean of sentence vectors: windows covering sentence `j`,
/// divided by `(k - w)(w + 1)`.
pub fn chunk_weights(k: usize, w: usize) -> Result<Vec<f64>> {
    if w < 1 || w >= k {
        return Err(Error::Window { window: w, sentences: k });
    }
    let chunks = k - w;
    let denom = (chunks * (w + 1)) as f64;
    Ok((0..k)
        .map(|j| {
            let first = j.saturating_sub(w);
            let last = j.min(chunks - 1);
            (last + 1 - first) as f64 / denom
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Mean of fixed per-sentence vectors, without normalization.
    struct LinearEncoder {
        vectors: Vec<(String, Vec<f64>)>,
    }

    impl Encoder for LinearEncoder {
        fn dim(&self) -> usize {
            self.vectors[0].1.len()
        }
        fn encode(&self, sentences: &[&str]) -> Result<EmbeddingVector> {
            let mut acc = vec![0.0; self.dim()];
            for s in sentences {
                let v = &self.vectors.iter().find(|(k, _)| k == s).unwrap().1;
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x / sentences.len() as f64;
                }
            }
            EmbeddingVector::new(acc)
        }
    }

    struct ConstEncoder(Vec<f64>);

    impl Encoder for ConstEncoder {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn encode(&self, _: &[&str]) -> Result<EmbeddingVector> {
            EmbeddingVector::new(self.0.clone())
        }
    }

    const S: [&str; 6] = [
        "A lighthouse on a cliff.",
        "Waves crash below.",
        "The sky is overcast.",
        "Shot on 35mm film.",
        "Muted teal palette.",
        "Wide-angle framing from the shore.",
    ];

    #[test]
    fn identical_encodings_pass_through() {
        let e = ConstEncoder(vec![0.3, -1.0, 2.0]);
        let out = chunk_embedding(&e, &S[..5], 2).unwrap();
        for (a, b) in out.as_slice().iter().zip(&e.0) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn widest_window_is_the_full_prompt() {
        let enc = MockEncoder::new(32, 4).unwrap();
        let out = chunk_embedding(&enc, &S, S.len() - 1).unwrap();
        assert_eq!(out, enc.encode(&S).unwrap());
    }

    #[test]
    fn window_one_over_four_sentences() {
        let enc = MockEncoder::new(16, 9).unwrap();
        let pairs = [enc.encode(&S[0..2]).unwrap(), enc.encode(&S[1..3]).unwrap(), enc.encode(&S[2..4]).unwrap()];
        let out = chunk_embedding(&enc, &S[..4], 1).unwrap();
        for j in 0..16 {
            let expect = pairs.iter().map(|p| p.as_slice()[j]).sum::<f64>() / 3.0;
            assert!((out.as_slice()[j] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn window_bounds() {
        let enc = MockEncoder::new(4, 0).unwrap();
        assert!(matches!(chunk_embedding(&enc, &S[..3], 0), Err(Error::Window { .. })));
        assert!(matches!(chunk_embedding(&enc, &S[..3], 3), Err(Error::Window { .. })));
        assert!(chunk_embedding(&enc, &S[..1], 1).is_err());
    }

    #[test]
    fn output_dimension_matches_encoder() {
        for d in [1, 7, 64] {
            let enc = MockEncoder::new(d, 1).unwrap();
            for k in 2..=6 {
                for w in 1..k {
                    assert_eq!(chunk_embedding(&enc, &S[..k], w).unwrap().dim(), d);
                }
            }
        }
    }

    #[test]
    fn mock_encoder_is_deterministic_and_normalized() {
        let a = MockEncoder::new(128, 2).unwrap();
        let b = MockEncoder::new(128, 2).unwrap();
        assert_eq!(a.encode(&S[..3]).unwrap(), b.encode(&S[..3]).unwrap());
        assert!((a.encode(&S[..3]).unwrap().norm() - 1.0).abs() < 1e-12);
        let c = MockEncoder::new(128, 3).unwrap();
        assert_ne!(a.encode(&S[..1]).unwrap(), c.encode(&S[..1]).unwrap());
        // Distinct sentences are nearly orthogonal in high dimension.
        let u = a.encode(&S[0..1]).unwrap();
        let v = a.encode(&S[1..2]).unwrap();
        let dot: f64 = u.as_slice().iter().zip(v.as_slice()).map(|(x, y)| x * y).sum();
        assert!(dot.abs() < 0.4);
    }

    #[test]
    fn linear_encoder_weights_match_brute_force() {
        for k in 2..=6 {
            let vectors: Vec<(String, Vec<f64>)> = (0..k)
                .map(|j| {
                    let mut v = vec![0.0; k];
                    v[j] = 1.0;
                    (S[j].to_string(), v)
                })
                .collect();
            let enc = LinearEncoder { vectors };
            for w in 1..k {
                let out = chunk_embedding(&enc, &S[..k], w).unwrap();
                // Brute force: count every (window, sentence) membership.
                let mut brute = vec![0.0; k];
                for i in 0..k - w {
                    for j in i..=i + w {
                        brute[j] += 1.0 / ((k - w) * (w + 1)) as f64;
                    }
                }
                let closed = chunk_weights(k, w).unwrap();
                for j in 0..k {
                    assert!((out.as_slice()[j] - brute[j]).abs() < 1e-14);
                    assert!((closed[j] - brute[j]).abs() < 1e-14);
                }
                assert!((closed.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            }
        }
    }
}
