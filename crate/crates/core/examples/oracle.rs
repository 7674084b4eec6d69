//! Cross-check the factor-and-gcd smoothness test against exhaustive search
//! on random pairs over `F_3`, and show the scan budget at larger `q`.
//!
//! `cargo run --release --example oracle`

use fillcurve::curve::{scan_oracle, singular_witness, DEFAULT_SCAN_BUDGET};
use fillcurve::{canonical_field, random_gq, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fillcurve::Result<()> {
    let f3 = canonical_field(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut agree = 0;
    for _ in 0..25 {
        let f = random_gq(&f3, &mut rng);
        let g = random_gq(&f3, &mut rng);
        let fast = singular_witness(&f, &g, &mut rng)?.is_none();
        let slow = scan_oracle(&f, &g, DEFAULT_SCAN_BUDGET)?.is_none();
        agree += (fast == slow) as usize;
    }
    println!("q = 3: verdicts agree on {agree}/25 random pairs");

    let f7 = canonical_field(7)?;
    let f = random_gq(&f7, &mut rng);
    match scan_oracle(&f, &f, DEFAULT_SCAN_BUDGET) {
        Err(Error::BudgetExceeded { needed, budget }) => {
            println!("q = 7: exhaustive search needs {needed} elements, budget {budget}")
        }
        other => println!("q = 7: {:?}", other.map(|w| w.is_none())),
    }
    Ok(())
}
