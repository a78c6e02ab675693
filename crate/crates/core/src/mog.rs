//! Uniform Mixture-of-Gaussians over reformulated embeddings.
//!
//! Besides sampling, this module carries the entropy estimators used to
//! check the mixture-entropy decomposition `H(mix) = mean h_i + I`, where
//! for well-separated components `I → log n`.

use std::f64::consts::{E, PI};

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{CenterSet, EmbeddingVector};
use crate::rng::Rng;

/// `n` isotropic Gaussian components with shared `sigma` and weights `1/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MogModel {
    centers: DMatrix<f64>,
    sigma: f64,
}

impl MogModel {
    pub fn new(centers: DMatrix<f64>, sigma: f64) -> Result<Self> {
        if centers.nrows() == 0 || centers.ncols() == 0 {
            return Err(Error::Dimension("mixture needs at least one component of dimension >= 1".into()));
        }
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::Domain(format!("sigma must be >= 0, got {sigma}")));
        }
        if centers.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("mixture centers must be finite".into()));
        }
        Ok(Self { centers, sigma })
    }

    /// One-dimensional mixture with the given component means.
    pub fn from_means_1d(means: &[f64], sigma: f64) -> Result<Self> {
        Self::new(DMatrix::from_column_slice(means.len(), 1, means), sigma)
    }

    pub fn n(&self) -> usize {
        self.centers.nrows()
    }

    pub fn dim(&self) -> usize {
        self.centers.ncols()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn centers(&self) -> &DMatrix<f64> {
        &self.centers
    }

    /// Mixture over the first `k` components only.
    pub fn restrict(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n() {
            return Err(Error::Domain(format!("cannot restrict {} components to {k}", self.n())));
        }
        Self::new(self.centers.rows(0, k).into_owned(), self.sigma)
    }

    /// Differential entropy of one component, in nats.
    pub fn component_entropy(&self) -> f64 {
        0.5 * self.dim() as f64 * (2.0 * PI * E * self.sigma * self.sigma).ln()
    }

    /// Mixture log-density at `x`, via log-sum-exp over components.
    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        if !(self.sigma > 0.0) {
            return Err(Error::Domain("density undefined for sigma = 0".into()));
        }
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!("point has dimension {}, mixture {}", x.len(), self.dim())));
        }
        Ok(self.log_density_unchecked(x))
    }

    fn log_density_unchecked(&self, x: &[f64]) -> f64 {
        let inv2s2 = 0.5 / (self.sigma * self.sigma);
        let d = self.dim() as f64;
        let mut max = f64::NEG_INFINITY;
        let exps: Vec<f64> = (0..self.n())
            .map(|k| {
                let sq: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(j, xj)| (xj - self.centers[(k, j)]).powi(2))
                    .sum();
                let e = -sq * inv2s2;
                max = max.max(e);
                e
            })
            .collect();
        let lse = max + exps.iter().map(|e| (e - max).exp()).sum::<f64>().ln();
        lse - (self.n() as f64).ln() - 0.5 * d * (2.0 * PI * self.sigma * self.sigma).ln()
    }
}

/// Mixture around a center set, with `sigma = sigma_base · gamma_euc / √d`.
pub fn build_mog(centers: &CenterSet, sigma_base: f64) -> Result<MogModel> {
    if !(sigma_base > 0.0) || !sigma_base.is_finite() {
        return Err(Error::Domain(format!("sigma_base must be positive, got {sigma_base}")));
    }
    let sigma = sigma_base * centers.gamma_euc / (centers.dim() as f64).sqrt();
    MogModel::new(centers.centers.clone(), sigma)
}

/// Draws one embedding: a uniform component index, then `center + sigma·z`.
/// Returns the 0-based component index alongside the sample.
pub fn sample_mog(model: &MogModel, rng: &mut Rng) -> (EmbeddingVector, usize) {
    let k = rng.random_range(0..model.n());
    let values: Vec<f64> = (0..model.dim())
        .map(|j| {
            let z: f64 = StandardNormal.sample(rng);
            model.centers[(k, j)] + model.sigma * z
        })
        .collect();
    // Centers are finite and sigma is finite, so the sample is too.
    (EmbeddingVector::new(values).expect("finite mixture sample"), k)
}

/// Entropy summary of a mixture, all in nats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub h_mix: f64,
    pub component_entropies: Vec<f64>,
    pub mutual_information: f64,
    pub theoretical: f64,
    /// Integration error estimate (quadrature) or standard error (Monte Carlo).
    pub std_error: f64,
}

impl EntropyReport {
    fn new(h_mix: f64, component: f64, n: usize, theoretical: f64, std_error: f64) -> Self {
        let component_entropies = vec![component; n];
        let mean = component_entropies.iter().sum::<f64>() / n as f64;
        Self {
            h_mix,
            component_entropies,
            mutual_information: h_mix - mean,
            theoretical,
            std_error,
        }
    }
}

/// `½·log(2πeσ²) + log n`.
pub fn theoretical_entropy(n: usize, sigma: f64) -> f64 {
    0.5 * (2.0 * PI * E * sigma * sigma).ln() + (n as f64).ln()
}

/// Target relative error of the 1D quadrature.
pub const QUADRATURE_RTOL: f64 = 1e-6;

/// Entropy of the 1D mixture with means `0, Δ, …, (n-1)Δ`, by quadrature.
pub fn mog_entropy_1d(n: usize, sigma: f64, delta: f64) -> Result<EntropyReport> {
    if n < 1 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    if !delta.is_finite() {
        return Err(Error::Domain("spacing must be finite".into()));
    }
    let means: Vec<f64> = (0..n).map(|k| k as f64 * delta).collect();
    mixture_entropy_1d(&means, sigma)
}

/// Entropy of a 1D uniform mixture with arbitrary means, by adaptive Simpson
/// quadrature over `[min μ - 10σ, max μ + 10σ]`.
pub fn mixture_entropy_1d(means: &[f64], sigma: f64) -> Result<EntropyReport> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let model = MogModel::from_means_1d(means, sigma)?;
    let n = means.len();
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min) - 10.0 * sigma;
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 10.0 * sigma;
    let integrand = |x: f64| {
        let lp = model.log_density_unchecked(&[x]);
        let p = lp.exp();
        if p == 0.0 { 0.0 } else { -p * lp }
    };
    let (h_mix, err) = integrate(integrand, lo, hi, QUADRATURE_RTOL)?;
    Ok(EntropyReport::new(h_mix, model.component_entropy(), n, theoretical_entropy(n, sigma), err))
}

/// Plug-in Monte-Carlo entropy estimate `-(1/N) Σ log p(x_k)`.
pub fn mog_entropy_mc(model: &MogModel, sample_count: usize, rng: &mut Rng) -> Result<EntropyReport> {
    if sample_count < 1000 {
        return Err(Error::Domain(format!("need at least 1000 samples, got {sample_count}")));
    }
    if !(model.sigma > 0.0) {
        return Err(Error::Domain("density undefined for sigma = 0".into()));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..sample_count {
        let (x, _) = sample_mog(model, rng);
        let v = -model.log_density_unchecked(x.as_slice());
        sum += v;
        sum_sq += v * v;
    }
    let nf = sample_count as f64;
    let mean = sum / nf;
    let var = ((sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    let h = model.component_entropy();
    let theoretical = h + (model.n() as f64).ln();
    Ok(EntropyReport::new(mean, h, model.n(), theoretical, (var / nf).sqrt()))
}

/// Adaptive Simpson quadrature to relative tolerance `rtol`.
///
/// The range is first cut into 64 panels; the tolerance is scaled by a
/// coarse estimate of `∫|f|`. Returns the integral and its error estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rtol: f64) -> Result<(f64, f64)> {
    const PANELS: usize = 64;
    const MAX_DEPTH: u32 = 40;
    if !(hi > lo) {
        return Ok((0.0, 0.0));
    }
    let width = (hi - lo) / PANELS as f64;
    let panels: Vec<(f64, f64, f64, f64, f64, f64)> = (0..PANELS)
        .map(|i| {
            let a = lo + i as f64 * width;
            let b = if i + 1 == PANELS { hi } else { a + width };
            let m = 0.5 * (a + b);
            let (fa, fm, fb) = (f(a), f(m), f(b));
            (a, b, fa, fm, fb, simpson(a, b, fa, fm, fb))
        })
        .collect();
    let scale: f64 = panels.iter().map(|p| p.5.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
    // Per-panel share of the absolute budget, with a safety factor of 10.
    let tol = rtol * scale / 10.0;
    let mut total = 0.0;
    let mut err = 0.0;
    for &(a, b, fa, fm, fb, whole) in &panels {
        let (v, e) = adaptive(&f, a, b, fa, fm, fb, whole, tol / PANELS as f64, MAX_DEPTH);
        total += v;
        err += e;
    }
    if !total.is_finite() || err > rtol * total.abs().max(scale) {
        return Err(Error::Integration { tolerance: rtol, estimate: err / total.abs().max(scale) });
    }
    Ok((total, err))
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return (left + right + diff / 15.0, diff.abs() / 15.0);
    }
    let (l, le) = adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
    let (r, re) = adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    (l + r, le + re)
}
