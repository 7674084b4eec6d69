//! Monte Carlo estimate of the fraction of smooth curves among random pairs.
//!
//! `cargo run --release --example sample`

use fillcurve::orbits::sample_stats;

fn main() -> fillcurve::Result<()> {
    for q in [3, 4, 5, 7, 8] {
        let s = sample_stats(q, 1000, 0, 0)?;
        println!("q = {q}: {}/{} smooth", s.smooth, s.n);
    }
    Ok(())
}
