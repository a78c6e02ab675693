//! Vendi Score on a few hand-checkable feature sets.

use promptmog::diversity::{self, FeatureSet, KernelMatrix, Lengthscale};

pub fn run_example() -> promptmog::Result<Vec<(&'static str, f64)>> {
    let same = FeatureSet::from_rows(&vec![vec![1.0, 2.0, 3.0]; 4])?;
    let basis = FeatureSet::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]])?;
    let half = FeatureSet::from_rows(&[vec![1.0, 0.0], vec![0.5, 0.75f64.sqrt()]])?;
    let line = FeatureSet::from_rows(&(0..20).map(|i| vec![f64::from(i)]).collect::<Vec<_>>())?;

    let cases = vec![
        ("4 identical vectors, cosine", diversity::vendi_score(&diversity::cosine_kernel(&same)?)?),
        ("3 orthonormal vectors, cosine", diversity::vendi_score(&diversity::cosine_kernel(&basis)?)?),
        ("cosine 0.5 pair", diversity::vendi_score(&diversity::cosine_kernel(&half)?)?),
        ("identity kernel, m = 7", diversity::vendi_score(&KernelMatrix::identity(7)?)?),
        ("20 points on a line, rbf l=1", diversity::vendi_score(&diversity::rbf_kernel(&line, Lengthscale::Fixed(1.0))?)?),
        ("20 points on a line, rbf median", diversity::vendi_score(&diversity::rbf_kernel(&line, Lengthscale::Median)?)?),
    ];
    for (name, score) in &cases {
        println!("{name:<34} {score:.6}");
    }
    Ok(cases)
}

#[allow(dead_code)]
fn main() -> promptmog::Result<()> {
    run_example().map(|_| ())
}
