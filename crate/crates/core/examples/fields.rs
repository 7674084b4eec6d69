//! Field towers and polynomial factorization.
//!
//! `cargo run --example fields`

use fillcurve::field::embed_root;
use fillcurve::{canonical_field, Fel, FieldCtx, UPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fillcurve::Result<()> {
    let f3 = canonical_field(3)?;
    let f9 = canonical_field(9)?;
    println!("F_9 = F_3[z]/({})", f9.modulus().expect("extension"));

    let p = UPoly::from_ints(&f3, &[1, 0, 1, 0, 1, 0, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let fact = p.factor(&mut rng)?;
    let parts: Vec<String> = fact
        .factors
        .iter()
        .map(|(h, m)| format!("({h})^{m}"))
        .collect();
    println!("{p} = {}", parts.join(" "));

    // a cubic extension of F_9, then a root of one of the quadratics inside it
    let cubic = UPoly::from_ints(&f9, &[1, 2, 0, 1]);
    if cubic.is_irreducible()? {
        let f729 = FieldCtx::extension(&f9, &cubic)?;
        let h = &fact.factors[1].0;
        let r = embed_root(h, &f729)?;
        println!("root of {h} in {f729}: {r}, check {}", h.eval(&r)?);
        let t = f729.generator().expect("extension");
        println!(
            "minimal polynomial of the generator over F_3: {}",
            t.minimal_polynomial(3)?
        );
    }
    let z = f9.generator().expect("extension");
    println!(
        "z^3 = {}, in F_3: {}",
        z.frobenius(3, 1),
        z.in_subfield(1, 3)?
    );
    println!("1/(z+1) = {}", (&z + &Fel::one(&f9)).inv()?);
    Ok(())
}
