//! Regenerates the derived tables in `data/` from `data/knotinfo.json`.

use std::path::Path;

use ribbon::fixtures;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let all = fixtures::build_table();
    let six = fixtures::build_scan6();
    std::fs::write(dir.join("knots.json"), all.to_json())?;
    std::fs::write(dir.join("scan6.json"), six.to_json())?;
    std::fs::write(dir.join("scan6.csv"), six.to_csv())?;
    println!("{} knots, scan table {:?}", all.records.len(), six.names());
    Ok(())
}
