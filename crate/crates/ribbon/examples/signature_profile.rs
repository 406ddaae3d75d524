//! Jump points and arcs of the Levine-Tristram signature function.

use ribbon::fixtures;

fn main() {
    for name in ["3_1", "8_18", "8_20", "12n_582"] {
        let k = fixtures::knot(name);
        println!("{name}");
        for j in &k.profile().jumps {
            let exact = j.exact_x.map(|(n, d)| format!(" = {n}/{d}")).unwrap_or_default();
            println!("  x {:.6}{exact}: deg {} η {} σ {}", j.x, j.deg, j.eta, j.sigma);
        }
        for a in &k.profile().arcs {
            println!("  ({:.4}, {:.4}) σ {}", a.start, a.end, a.sigma);
        }
    }
}
