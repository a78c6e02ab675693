//! Uniformly separated center placement around a base embedding.
//!
//! Centers are built from the vertices of a regular simplex: the centering
//! matrix `H = I - 11ᵀ/n` has rank `n - 1`, and its right singular vectors
//! give `n` centered points whose normalized rows have pairwise inner
//! product `-1/(n-1)`. A Haar-random orthonormal frame carries those
//! `n - 1` coordinates into the ambient space, and the result is scaled to
//! radius `gamma_euc` around the base.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// A prompt embedding flattened to a single real vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension("embedding must have d >= 1".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("embedding entry {i} is not finite")));
        }
        Ok(Self(values))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }
}

impl TryFrom<Vec<f64>> for EmbeddingVector {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<EmbeddingVector> for Vec<f64> {
    fn from(e: EmbeddingVector) -> Self {
        e.0
    }
}

/// Unit simplex directions, zero-padded to an ambient dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexFrame {
    directions: DMatrix<f64>,
}

impl SimplexFrame {
    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.directions.nrows()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.directions.ncols()
    }

    /// `n × d` matrix of unit rows.
    pub fn directions(&self) -> &DMatrix<f64> {
        &self.directions
    }

    /// The `n × (n-1)` block holding all nonzero coordinates.
    pub fn coordinates(&self) -> DMatrix<f64> {
        self.directions.columns(0, self.n() - 1).into_owned()
    }
}

/// Centers on the sphere of radius `gamma_euc` around `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet {
    pub centers: DMatrix<f64>,
    pub base: EmbeddingVector,
    pub gamma_euc: f64,
}

impl CenterSet {
    pub fn n(&self) -> usize {
        self.centers.nrows()
    }

    pub fn dim(&self) -> usize {
        self.centers.ncols()
    }

    pub fn center(&self, i: usize) -> Vec<f64> {
        self.centers.row(i).iter().copied().collect()
    }

    /// Offsets `center_i - base` as an `n × d` matrix.
    pub fn offsets(&self) -> DMatrix<f64> {
        let base = self.base.as_slice();
        DMatrix::from_fn(self.n(), self.dim(), |i, j| self.centers[(i, j)] - base[j])
    }

    /// Largest deviations from the center-set invariants, relative to
    /// `gamma` (radius) and `gamma²` (inner products).
    pub fn deviations(&self) -> CenterDeviations {
        let off = self.offsets();
        let n = self.n();
        let g = self.gamma_euc;
        let gram = &off * off.transpose();
        let target = if n > 1 { -g * g / (n as f64 - 1.0) } else { 0.0 };
        let scale_r = if g > 0.0 { g } else { 1.0 };
        let scale_ip = if g > 0.0 { g * g } else { 1.0 };
        let mut radius = 0.0_f64;
        let mut inner = 0.0_f64;
        for i in 0..n {
            radius = radius.max((gram[(i, i)].sqrt() - g).abs() / scale_r);
            for j in 0..i {
                inner = inner.max((gram[(i, j)] - target).abs() / scale_ip);
            }
        }
        CenterDeviations { radius, inner_product: inner }
    }

    /// Fails with a validation error if either deviation exceeds `tol`.
    pub fn verify(&self, tol: f64) -> Result<CenterDeviations> {
        if self.base.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "base has dimension {} but centers have {}",
                self.base.dim(),
                self.dim()
            )));
        }
        let dev = self.deviations();
        if dev.radius > tol || dev.inner_product > tol {
            return Err(Error::Validation(format!(
                "center invariants violated: radius deviation {:e}, inner-product deviation {:e} (tolerance {:e})",
                dev.radius, dev.inner_product, tol
            )));
        }
        Ok(dev)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenterDeviations {
    pub radius: f64,
    pub inner_product: f64,
}

/// Cosine-to-radius conversion rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GammaMode {
    /// Chord length between equal-norm vectors: `‖e‖·√(2(1-γ))`.
    #[default]
    Standard,
    /// `‖e‖·√(1-2γ)`, undefined for `γ > 1/2`.
    Literal,
}

/// Converts a cosine-similarity threshold into a Euclidean radius.
pub fn gamma_sim_to_euc(gamma_sim: f64, base_norm: f64, mode: GammaMode) -> Result<f64> {
    if !(base_norm > 0.0) || !base_norm.is_finite() {
        return Err(Error::Domain(format!("base norm must be positive, got {base_norm}")));
    }
    if !gamma_sim.is_finite() {
        return Err(Error::Domain("gamma_sim must be finite".into()));
    }
    match mode {
        GammaMode::Standard => {
            if !(gamma_sim > -1.0 && gamma_sim <= 1.0) {
                return Err(Error::Domain(format!("gamma_sim must lie in (-1, 1], got {gamma_sim}")));
            }
            Ok(base_norm * (2.0 * (1.0 - gamma_sim)).sqrt())
        }
        GammaMode::Literal => {
            let radicand = 1.0 - 2.0 * gamma_sim;
            if radicand < 0.0 {
                return Err(Error::NegativeRadicand { gamma_sim, radicand });
            }
            if gamma_sim <= -1.0 || gamma_sim > 1.0 {
                return Err(Error::Domain(format!("gamma_sim must lie in (-1, 1], got {gamma_sim}")));
            }
            Ok(base_norm * radicand.sqrt())
        }
    }
}

/// Centered simplex coordinates before row normalization: the right
/// singular vectors of the centering matrix spanning its nonzero singular
/// values, as an `n × (n-1)` matrix. Each row has squared norm `(n-1)/n`.
pub fn centered_basis(n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::Domain(format!("simplex needs n >= 2, got {n}")));
    }
    let inv = 1.0 / n as f64;
    let h = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 - inv } else { -inv });
    let svd = h.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Eigen("SVD did not return right singular vectors".into()))?;
    // H is a projector: singular values are 1 (n-1 times) and 0 (once).
    let keep: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] > 0.5).collect();
    if keep.len() != n - 1 {
        return Err(Error::Eigen(format!(
            "centering matrix has numerical rank {} (expected {})",
            keep.len(),
            n - 1
        )));
    }
    Ok(DMatrix::from_fn(n, n - 1, |i, j| v_t[(keep[j], i)]))
}

/// Regular simplex directions for `n` vertices, zero-padded to dimension `d`.
pub fn simplex_directions(n: usize, d: usize) -> Result<SimplexFrame> {
    if n < 2 {
        return Err(Error::Domain(format!("simplex needs n >= 2, got {n}")));
    }
    if d < n - 1 {
        return Err(Error::Dimension(format!(
            "{n} simplex vertices need d >= {}, got d = {d}",
            n - 1
        )));
    }
    let basis = centered_basis(n)?;
    let mut directions = DMatrix::zeros(n, d);
    for i in 0..n {
        let row = basis.row(i);
        let norm = row.norm();
        for j in 0..n - 1 {
            directions[(i, j)] = row[j] / norm;
        }
    }
    Ok(SimplexFrame { directions })
}

/// Haar-distributed `d × k` matrix with orthonormal columns.
///
/// QR of a seeded standard-Gaussian matrix, with each column of `Q` flipped
/// so that the matching diagonal entry of `R` is positive.
pub fn random_rotation(d: usize, k: usize, seed: u64) -> Result<DMatrix<f64>> {
    if k == 0 || k > d {
        return Err(Error::Domain(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    let mut rng = rng::substream(seed, "rotation");
    // Column-major fill keeps the draw order independent of nalgebra internals.
    let mut gauss = DMatrix::zeros(d, k);
    for j in 0..k {
        for i in 0..d {
            gauss[(i, j)] = StandardNormal.sample(&mut rng);
        }
    }
    let qr = gauss.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(q)
}

/// Places `frame.n()` centers at radius `gamma_euc` around `base`.
///
/// Only the `n - 1` nonzero simplex coordinates are rotated, through a
/// `dim(base) × (n-1)` orthonormal frame; this equals zero-padding followed
/// by a full Haar rotation.
pub fn place_centers(
    base: &EmbeddingVector,
    frame: &SimplexFrame,
    gamma_euc: f64,
    seed: u64,
) -> Result<CenterSet> {
    if !(gamma_euc >= 0.0) || !gamma_euc.is_finite() {
        return Err(Error::Domain(format!("gamma_euc must be >= 0, got {gamma_euc}")));
    }
    let d = base.dim();
    let n = frame.n();
    if frame.dim() > d || n - 1 > d {
        return Err(Error::Dimension(format!(
            "frame of dimension {} with {n} vertices does not fit a base of dimension {d}",
            frame.dim()
        )));
    }
    let rotation = random_rotation(d, n - 1, seed)?;
    let offsets = frame.coordinates() * rotation.transpose();
    let b = base.as_slice();
    let centers = DMatrix::from_fn(n, d, |i, j| b[j] + gamma_euc * offsets[(i, j)]);
    Ok(CenterSet { centers, base: base.clone(), gamma_euc })
}
