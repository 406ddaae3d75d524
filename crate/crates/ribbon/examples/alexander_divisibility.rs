//! `Δ_K` must divide `Δ_J` when `J ≥ K`.

use ribbon::{fixtures, obstruct};

fn main() {
    let pairs = [("8_18#-8_18", "8_20#-8_20"), ("8_20#-8_20", "8_18#-8_18"), ("10_99", "12n_582"), ("3_1", "4_1")];
    for (j, k) in pairs {
        let e = obstruct::alexander_obstruction(&fixtures::knot(j), &fixtures::knot(k));
        println!("{j} >= {k}: {}", e.verdict);
    }
}
