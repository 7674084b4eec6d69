//! Decide smoothness of a few curves `C_{f,g}` over `F_3` and print the
//! singular point when there is one.
//!
//! `cargo run --example check`

use fillcurve::curve::{build_curve, check_smoothness, verify_space_filling};
use fillcurve::{canonical_field, BinForm};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fillcurve::Result<()> {
    let f3 = canonical_field(3)?;
    let square = BinForm::parse(&f3, "1,0,2,0,1")?; // X0^4 - X0^2 X1^2 + X1^4
    let split = BinForm::parse(&f3, "1,0,0,0,1")?; // X0^4 + X1^4
    let irreducible = BinForm::parse(&f3, "1,0,0,1,2")?; // X0^4 + X0 X1^3 - X1^4
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    for (f, g) in [
        (&square, &square),
        (&split, &square),
        (&irreducible, &irreducible),
    ] {
        let curve = build_curve(f, g)?;
        let report = check_smoothness(f, g, &mut rng)?;
        println!("f = {f}, g = {g}");
        println!("  space filling: {}", verify_space_filling(&curve));
        match &report.witness {
            None => println!("  smooth"),
            Some(w) => {
                let (x, y) = w.point();
                println!(
                    "  singular at {x} x {y} in a degree-{} extension",
                    w.compositum_degree()
                );
                println!(
                    "  minimal polynomials: {} and {}",
                    w.alpha_minpoly(),
                    w.beta_minpoly()
                );
            }
        }
    }
    Ok(())
}
