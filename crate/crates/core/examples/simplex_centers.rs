//! Place 50 equidistant centers around a prompt embedding and check the
//! simplex invariants.

use promptmog::geometry::{self, EmbeddingVector, GammaMode};
use promptmog::rng;
use rand::Rng as _;

pub fn run_example() -> promptmog::Result<geometry::CenterDeviations> {
    let dim = 256;
    let mut r = rng::substream(7, "example-base");
    let base = EmbeddingVector::new((0..dim).map(|_| r.random_range(-1.0..1.0)).collect())?;

    let gamma_euc = geometry::gamma_sim_to_euc(0.7, base.norm(), GammaMode::Standard)?;
    let frame = geometry::simplex_directions(50, dim)?;
    let centers = geometry::place_centers(&base, &frame, gamma_euc, 11)?;
    let dev = centers.verify(1e-9)?;

    println!("base norm     {:.6}", base.norm());
    println!("gamma_euc     {gamma_euc:.6}");
    println!("centers       {} x {}", centers.n(), centers.dim());
    println!("radius dev    {:.3e}", dev.radius);
    println!("inner dev     {:.3e}", dev.inner_product);

    // The literal conversion rejects similarity thresholds above one half.
    match geometry::gamma_sim_to_euc(0.7, base.norm(), GammaMode::Literal) {
        Err(e) => println!("literal mode  {e}"),
        Ok(g) => println!("literal mode  {g}"),
    }
    Ok(dev)
}

#[allow(dead_code)]
fn main() -> promptmog::Result<()> {
    run_example().map(|_| ())
}
