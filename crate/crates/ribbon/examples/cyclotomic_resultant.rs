//! `res(t^m - 1, Φ_n)` for `m < 7`.

use ribbon::twisted::cyclotomic_resultant;

fn main() {
    for n in [6u64, 10, 15, 21, 35] {
        let row: Vec<String> = (1..n.min(7)).map(|m| cyclotomic_resultant(m, n).unwrap().to_string()).collect();
        println!("n = {n:2}: {}", row.join(" "));
    }
}
