//! All ordered pairs of the six-knot table.

use ribbon::{fixtures, obstruct};

fn main() {
    let table = fixtures::scan6();
    let scan = obstruct::scan_table(&table.records, &obstruct::ObstructOptions::default(), 2);
    for r in &scan.reports {
        let by: Vec<&str> = r.entries.iter().filter(|e| e.verdict == obstruct::Verdict::Obstructed).map(|e| e.test.name()).collect();
        println!("{:>9} >= {:<9} {:<16} {}", r.j, r.k, r.aggregate.to_string(), by.join(","));
    }
    println!("{} pairs, {:?}", scan.summary.pairs, scan.summary.obstructed_by);
}
