//! The double-cover test on explicit groups and on bundled knots.

use ribbon::obstruct::{self, double_cover_groups};
use ribbon::zmodules::{embedding_cokernel_types, square_extension_exists, AbelianGroup, Partition};
use ribbon::fixtures;

fn main() {
    let (a, b) = (Partition::new(vec![5, 1]), Partition::new(vec![2]));
    for w in embedding_cokernel_types(&a, &b) {
        println!("Z/p^2 -> Z/p^5 + Z/p has cokernel type {w}, square extension: {}", square_extension_exists(&w));
    }

    let cases: [(&[i64], &[i64]); 3] = [(&[3, 243], &[9]), (&[3, 3, 25], &[9]), (&[9, 9, 5], &[5])];
    for (j, k) in cases {
        let (hj, hk) = (AbelianGroup::from_cyclic_orders(j), AbelianGroup::from_cyclic_orders(k));
        let e = double_cover_groups(&hj, &hk);
        println!("{hj} over {hk}: {}", e.verdict);
    }

    let (j, k) = (fixtures::knot("8_18#-8_18"), fixtures::knot("8_20#-8_20"));
    let e = obstruct::double_cover_obstruction(&j, &k);
    println!("{} >= {}: {} {}", j.name, k.name, e.verdict, serde_json::to_string(&e.witness).unwrap());
}
