//! Reading a table from JSON or CSV: `cargo run --example load_table -- path.csv`.

use std::path::PathBuf;

use ribbon::table::KnotTable;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/scan6.csv")));
    match KnotTable::load(&path) {
        Ok(t) => {
            for r in &t.records {
                println!("{:<10} genus {} pd {}", r.name, r.seifert.size() / 2, r.pd.is_some());
            }
        }
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            std::process::exit(2);
        }
    }
}
