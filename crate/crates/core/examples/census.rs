//! Orbit-reduced census over `F_3`: the seven orbits on `G_3`, which orbits
//! pair smoothly, and the total count.
//!
//! `cargo run --release --example census [q]`

use fillcurve::binform::Guards;
use fillcurve::orbits::census;

fn main() -> fillcurve::Result<()> {
    let q = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("q must be an integer"))
        .unwrap_or(3);
    let c = census(q, 0, 0, &Guards::default())?;
    println!(
        "|G_{q}| = {}, {} orbits",
        c.table.total,
        c.table.orbits.len()
    );
    for (j, o) in c.table.orbits.iter().enumerate().take(30) {
        println!(
            "  O{j}: size {:>3}, type {:<6} rep {}  smooth with {:?}",
            o.size,
            o.factor_type(),
            o.representative,
            c.smooth_partners(j)
        );
    }
    println!(
        "smooth pairs: {} of {}",
        c.total_smooth_pairs(),
        c.total_pairs()
    );
    Ok(())
}
