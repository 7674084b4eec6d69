//! Symmetric smooth curves `C_{f,f}` for odd `q`, all four variants.
//!
//! `cargo run --example symmetric`

use fillcurve::construct::{symmetric_form, symmetric_lambda_candidates};
use fillcurve::curve::is_smooth;

fn main() -> fillcurve::Result<()> {
    for q in [3, 5, 7, 9, 11] {
        let lambdas = symmetric_lambda_candidates(q)?;
        let shown: Vec<String> = lambdas.iter().map(|l| format!("[{l}]")).collect();
        println!("q = {q}: lambda in {}", shown.join(" "));
        for variant in 0..4 {
            let mut smooth = 0;
            for index in 0..lambdas.len() {
                let f = symmetric_form(q, variant, index)?;
                smooth += is_smooth(&f, &f)? as usize;
            }
            let first = symmetric_form(q, variant, 0)?;
            println!(
                "  variant {variant}: {smooth}/{} smooth, e.g. {first}",
                lambdas.len()
            );
        }
    }
    Ok(())
}
