//! Entropy of a 1D mixture of well-separated Gaussians grows as h + log n,
//! and the sample Vendi Score grows with it.

use promptmog::cli::{toy_entropy_table, EntropyRow};

pub fn run_example() -> promptmog::Result<Vec<EntropyRow>> {
    let (rows, _) = toy_entropy_table(10, 1.0, 6.0, 300, 0)?;
    println!("{:>3} {:>12} {:>12} {:>10}", "n", "H_n", "h + log n", "vendi");
    for r in &rows {
        println!("{:>3} {:>12.6} {:>12.6} {:>10.4}", r.n, r.h_estimated, r.h_theoretical, r.vendi);
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> promptmog::Result<()> {
    run_example().map(|_| ())
}
