//! Build a smooth partner `g` for random `f` over `F_q` and show the
//! parameters of the construction.
//!
//! `cargo run --example construct`

use fillcurve::construct::{construct_partner, PartnerTrace};
use fillcurve::curve::is_smooth;
use fillcurve::{canonical_field, random_gq};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fillcurve::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [3, 7, 9, 11] {
        let ctx = canonical_field(q)?;
        let f = random_gq(&ctx, &mut rng);
        let (g, trace) = construct_partner(&f, &mut rng)?;
        println!("q = {q}\n  f = {f}\n  g = {g}");
        match trace {
            PartnerTrace::Galois(t) => {
                println!(
                    "  lambda1 = {}, lambda2 = {}, k = {}",
                    t.lambda1, t.lambda2, t.k
                );
                println!(
                    "  avoided {} quadratics, chose {}",
                    t.excluded_quadratics.len(),
                    t.chosen_quadratic
                );
            }
            PartnerTrace::Search { candidates_tried } => {
                println!("  found by search after {candidates_tried} candidates");
            }
        }
        println!("  smooth: {}", is_smooth(&f, &g)?);
    }
    Ok(())
}
