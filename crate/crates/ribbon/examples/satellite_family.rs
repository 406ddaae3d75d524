//! Satellites `K_q` of the trefoil, told apart by `Δ^{2,3}`.

use ribbon::{fixtures, twisted};

fn main() {
    let pres = fixtures::knot("3_1").presentation().unwrap();
    let rep = twisted::metabelian_rep(&pres, 2, 3, twisted::DEFAULT_GROUP_CAP).unwrap();
    let a = twisted::first_nonzero_class(&rep).unwrap();
    let fam = twisted::satellite_family(&pres, 2, 3, &a, &[5, 7, 11], twisted::DEFAULT_GROUP_CAP).unwrap();
    println!("cycle type of A: {:?}", fam.cycle_type);
    for m in &fam.members {
        println!("q = {:2}: m_q = {}, Δ = {}", m.q, m.m_q, m.delta);
    }
}
