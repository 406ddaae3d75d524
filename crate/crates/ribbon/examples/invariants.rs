//! Classical invariants of a bundled knot: `cargo run --example invariants -- 8_18`.

use ribbon::{fixtures, seifert};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "12n_582".into());
    let k = fixtures::knot(&name);
    println!("{}", k.name);
    println!("  Δ        = {}", k.alexander().normalize_units());
    println!("  det      = {}", k.determinant());
    println!("  H_1(Σ_2) = {}", k.double_cover());
    for r in 3..=5 {
        println!("  |H_1(Σ_{r})| = {}", seifert::branched_cover_order(&k.seifert, r).unwrap());
    }
    if let Some(pd) = &k.pd {
        println!("  Δ from the diagram = {}", ribbon::obstruct::pd_alexander(pd).normalize_units());
    }
}
