//! Vendi Score: the exponential of the Shannon entropy of the eigenvalues of
//! a normalized sample-similarity matrix. It reads as an effective number of
//! distinct samples and lies in `[1, m]`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue of the raw kernel.
pub const PSD_TOL: f64 = 1e-8;
/// Normalized eigenvalues below this are treated as zero.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// `m` samples by `f` features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    features: DMatrix<f64>,
}

impl FeatureSet {
    pub fn new(features: DMatrix<f64>) -> Result<Self> {
        if features.nrows() == 0 || features.ncols() == 0 {
            return Err(Error::Dimension("feature set needs m >= 1 rows and f >= 1 columns".into()));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("features must be finite".into()));
        }
        Ok(Self { features })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let f = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != f) {
            return Err(Error::Dimension(format!("row {i} has length {} (expected {f})", rows[i].len())));
        }
        Self::new(DMatrix::from_fn(m, f, |i, j| rows[i][j]))
    }

    pub fn len(&self) -> usize {
        self.features.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }
}

/// Symmetric similarity matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    values: DMatrix<f64>,
}

impl KernelMatrix {
    /// Validates symmetry and the unit diagonal. Positive semidefiniteness is
    /// checked when the spectrum is computed.
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        let m = values.nrows();
        if m == 0 || values.ncols() != m {
            return Err(Error::InvalidKernel(format!("kernel must be square and nonempty, got {:?}", values.shape())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidKernel("kernel entries must be finite".into()));
        }
        for i in 0..m {
            if (values[(i, i)] - 1.0).abs() > DIAGONAL_TOL {
                return Err(Error::InvalidKernel(format!("diagonal entry {i} is {} (expected 1)", values[(i, i)])));
            }
            for j in 0..i {
                if (values[(i, j)] - values[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidKernel(format!("kernel is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(DMatrix::identity(m, m))
    }

    pub fn size(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }
}

/// Pairwise cosine similarities.
pub fn cosine_kernel(fs: &FeatureSet) -> Result<KernelMatrix> {
    let x = fs.features();
    let m = x.nrows();
    let mut unit = x.clone();
    for i in 0..m {
        let norm = x.row(i).norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm { index: i });
        }
        unit.row_mut(i).scale_mut(1.0 / norm);
    }
    let gram = &unit * unit.transpose();
    Ok(KernelMatrix { values: symmetric_from_lower(&gram) })
}

/// Lengthscale choice for the RBF kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lengthscale {
    Fixed(f64),
    /// Median of the pairwise distances.
    Median,
}

/// Gaussian kernel `exp(-‖x_i - x_j‖² / (2ℓ²))`.
pub fn rbf_kernel(fs: &FeatureSet, lengthscale: Lengthscale) -> Result<KernelMatrix> {
    let x = fs.features();
    let m = x.nrows();
    let sq = pairwise_sq_distances(x);
    let ell = match lengthscale {
        Lengthscale::Fixed(l) => {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::Domain(format!("lengthscale must be positive, got {l}")));
            }
            l
        }
        Lengthscale::Median => {
            if m < 2 {
                return Err(Error::Domain("median lengthscale needs at least 2 samples".into()));
            }
            let mut dists: Vec<f64> = (0..m).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| sq[(i, j)].sqrt()).collect();
            dists.sort_by(f64::total_cmp);
            let k = dists.len();
            let med = if k % 2 == 1 { dists[k / 2] } else { 0.5 * (dists[k / 2 - 1] + dists[k / 2]) };
            if med == 0.0 {
                return Err(Error::Degenerate("median pairwise distance is zero".into()));
            }
            med
        }
    };
    let scale = 1.0 / (2.0 * ell * ell);
    let k = DMatrix::from_fn(m, m, |i, j| if i == j { 1.0 } else { (-sq[(i, j)] * scale).exp() });
    Ok(KernelMatrix { values: symmetric_from_lower(&k) })
}

fn pairwise_sq_distances(x: &DMatrix<f64>) -> DMatrix<f64> {
    let m = x.nrows();
    let mut out = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..i {
            let d: f64 = x.row(i).iter().zip(x.row(j).iter()).map(|(a, b)| (a - b).powi(2)).sum();
            out[(i, j)] = d;
            out[(j, i)] = d;
        }
    }
    out
}

fn symmetric_from_lower(k: &DMatrix<f64>) -> DMatrix<f64> {
    let m = k.nrows();
    DMatrix::from_fn(m, m, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Greater => k[(i, j)],
        std::cmp::Ordering::Less => k[(j, i)],
    })
}

/// Score plus the clipped, descending spectrum of `K/m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VendiResult {
    pub score: f64,
    pub eigenvalues: Vec<f64>,
}

/// Vendi Score of order 1 with natural-log entropy.
pub fn vendi_score(k: &KernelMatrix) -> Result<f64> {
    vendi(k).map(|r| r.score)
}

pub fn vendi(k: &KernelMatrix) -> Result<VendiResult> {
    let m = k.size();
    let eig = SymmetricEigen::try_new(k.values.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Eigen(format!("symmetric eigensolver did not converge on a {m}x{m} kernel")))?;
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let mut eigenvalues: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            let l = l / m as f64;
            if l < EIGEN_FLOOR { 0.0 } else { l }
        })
        .collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let entropy: f64 = eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()).sum();
    Ok(VendiResult { score: entropy.exp(), eigenvalues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cosine_examples() {
        let k = cosine_kernel(&FeatureSet::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap()).unwrap();
        assert!((k.values() - DMatrix::from_element(2, 2, 1.0)).amax() < 1e-15);
        let k = cosine_kernel(&FeatureSet::from_rows(&[vec![1.0, 0.0], vec![0.0, 3.0]]).unwrap()).unwrap();
        assert_eq!(k.values(), &DMatrix::identity(2, 2));
        let s = 0.5f64.sqrt();
        let k = cosine_kernel(&FeatureSet::from_rows(&[vec![1.0, 0.0], vec![s, s]]).unwrap()).unwrap();
        assert!((k.values()[(0, 1)] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn cosine_reports_zero_row() {
        let fs = FeatureSet::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(cosine_kernel(&fs), Err(Error::ZeroNorm { index: 1 })));
    }

    #[test]
    fn rbf_examples() {
        let fs = FeatureSet::from_rows(&[vec![2.0, 2.0], vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        let k = rbf_kernel(&fs, Lengthscale::Fixed(0.3)).unwrap();
        assert!(k.values().iter().all(|&v| v == 1.0));
        assert!(matches!(rbf_kernel(&fs, Lengthscale::Median), Err(Error::Degenerate(_))));

        let ell = 0.7;
        let fs = FeatureSet::from_rows(&[vec![0.0], vec![ell * 2f64.sqrt()]]).unwrap();
        let k = rbf_kernel(&fs, Lengthscale::Fixed(ell)).unwrap();
        assert!((k.values()[(0, 1)] - (-1f64).exp()).abs() < 1e-12);

        let fs = FeatureSet::from_rows(&[vec![0.0], vec![1.5], vec![3.0]]).unwrap();
        let k = rbf_kernel(&fs, Lengthscale::Fixed(1.5)).unwrap();
        assert!((k.values()[(0, 2)] - 0.13534).abs() < 1e-5);

        let one = FeatureSet::from_rows(&[vec![1.0]]).unwrap();
        assert!(rbf_kernel(&one, Lengthscale::Median).is_err());
    }

    #[test]
    fn rbf_median_lengthscale() {
        // Distances 1, 2, 3: median 2, so K(0,1) = exp(-1/8).
        let fs = FeatureSet::from_rows(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let k = rbf_kernel(&fs, Lengthscale::Median).unwrap();
        assert!((k.values()[(0, 1)] - (-0.125f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn vendi_oracle_cases() {
        for m in [1, 2, 5, 30] {
            let ones = KernelMatrix::new(DMatrix::from_element(m, m, 1.0)).unwrap();
            assert!((vendi_score(&ones).unwrap() - 1.0).abs() < 1e-9);
            let id = KernelMatrix::identity(m).unwrap();
            assert!((vendi_score(&id).unwrap() - m as f64).abs() < 1e-9);
        }
        let k = KernelMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])).unwrap();
        let r = vendi(&k).unwrap();
        assert!((r.eigenvalues[0] - 0.75).abs() < 1e-12 && (r.eigenvalues[1] - 0.25).abs() < 1e-12);
        assert!((r.score - 1.75477).abs() < 1e-5);
    }

    #[test]
    fn kernel_validation() {
        assert!(KernelMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0])).is_err());
        assert!(KernelMatrix::new(DMatrix::from_row_slice(2, 2, &[0.9, 0.0, 0.0, 1.0])).is_err());
        assert!(KernelMatrix::new(DMatrix::zeros(2, 3)).is_err());
        // Unit diagonal but indefinite: eigenvalues 1 ± 2.
        let bad = KernelMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).unwrap();
        assert!(matches!(vendi_score(&bad), Err(Error::NotPsd { .. })));
    }

    fn features(rows: &[Vec<f64>]) -> FeatureSet {
        FeatureSet::from_rows(rows).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bounds_permutation_and_duplication(
            rows in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 2..14),
            rot in 0usize..13,
        ) {
            let fs = features(&rows);
            let k = rbf_kernel(&fs, Lengthscale::Fixed(1.0)).unwrap();
            let vs = vendi_score(&k).unwrap();
            prop_assert!(vs >= 1.0 - 1e-9 && vs <= rows.len() as f64 + 1e-9);

            let mut perm = rows.clone();
            perm.rotate_left(rot % rows.len());
            perm.reverse();
            let vp = vendi_score(&rbf_kernel(&features(&perm), Lengthscale::Fixed(1.0)).unwrap()).unwrap();
            prop_assert!((vs - vp).abs() < 1e-10);

            let doubled: Vec<Vec<f64>> = rows.iter().chain(rows.iter()).cloned().collect();
            let vd = vendi_score(&rbf_kernel(&features(&doubled), Lengthscale::Fixed(1.0)).unwrap()).unwrap();
            prop_assert!((vs - vd).abs() < 1e-8);
        }

        #[test]
        fn cosine_kernel_is_valid(rows in prop::collection::vec(prop::collection::vec(0.1f64..3.0, 4), 1..12)) {
            let k = cosine_kernel(&features(&rows)).unwrap();
            let vs = vendi_score(&k).unwrap();
            prop_assert!(vs >= 1.0 - 1e-9 && vs <= rows.len() as f64 + 1e-9);
        }
    }
}
