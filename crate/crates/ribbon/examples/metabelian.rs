//! Twisted Alexander polynomials of metabelian representations.

use ribbon::{fixtures, twisted};

fn main() {
    for (name, r, p) in [("3_1", 2, 3), ("4_1", 2, 5), ("5_2", 2, 7), ("3_1", 3, 2)] {
        let pres = fixtures::knot(name).presentation().unwrap();
        let rep = twisted::metabelian_rep(&pres, r, p, twisted::DEFAULT_GROUP_CAP).unwrap();
        let d = twisted::delta_rp(&pres, r, p, twisted::DEFAULT_GROUP_CAP).unwrap();
        println!("{name} (r={r}, p={p}): |Γ| = {}, Δ = {}", rep.order(), d.normalize_units());
    }
}
