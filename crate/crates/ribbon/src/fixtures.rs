//! Bundled knot data.
//!
//! `data/knotinfo.json` holds rows of the public knot table verbatim. The
//! bundled table mirrors 12n_582 so that `σ_{1/3} = +1`, and adds the
//! concordance inverse of that knot and the connected sums `8_18#-8_18`,
//! `8_20#-8_20`.

use crate::obstruct::KnotRecord;
use crate::table::KnotTable;

pub const KNOTINFO_JSON: &str = include_str!("../data/knotinfo.json");
pub const KNOTS_JSON: &str = include_str!("../data/knots.json");
pub const SCAN6_JSON: &str = include_str!("../data/scan6.json");
pub const SCAN6_CSV: &str = include_str!("../data/scan6.csv");

pub const SCAN6_NAMES: [&str; 6] = ["3_1", "4_1", "6_1", "10_99", "12n_582", "-12n_582"];

/// Rows of the public table, as published.
pub fn knotinfo() -> KnotTable {
    KnotTable::from_json(KNOTINFO_JSON).expect("bundled table is valid")
}

/// The mirror image: `-V` and the PD code with every crossing flipped.
pub fn mirror(r: &KnotRecord, name: &str) -> KnotRecord {
    let seifert = crate::seifert::SeifertMatrix::new(r.seifert.matrix().neg()).expect("mirror of a Seifert matrix");
    KnotRecord::new(name, seifert, r.pd.as_ref().map(|p| p.mirror())).expect("mirror keeps Δ")
}

/// `K # -K`.
pub fn double(r: &KnotRecord) -> KnotRecord {
    let inv = r.concordance_inverse(format!("-{}", r.name));
    r.connected_sum(&inv, format!("{0}#-{0}", r.name))
}

/// The full bundled table, built from the published rows.
pub fn build_table() -> KnotTable {
    let base = knotinfo();
    let mut records: Vec<KnotRecord> = Vec::new();
    for r in &base.records {
        if r.name == "12n_582" {
            let k = mirror(r, "12n_582");
            records.push(k.concordance_inverse("-12n_582"));
            records.push(k);
        } else {
            records.push(r.clone());
        }
    }
    for name in ["8_18", "8_20"] {
        records.push(double(base.get(name).unwrap()));
    }
    KnotTable::new(records).expect("derived records are consistent")
}

/// The six-knot scan table, in `SCAN6_NAMES` order.
pub fn build_scan6() -> KnotTable {
    let all = build_table();
    KnotTable::new(SCAN6_NAMES.iter().map(|n| all.get(n).unwrap().clone()).collect()).unwrap()
}

/// `data/knots.json`.
pub fn bundled() -> KnotTable {
    KnotTable::from_json(KNOTS_JSON).expect("bundled table is valid")
}

/// `data/scan6.json`.
pub fn scan6() -> KnotTable {
    KnotTable::from_json(SCAN6_JSON).expect("bundled table is valid")
}

pub fn knot(name: &str) -> KnotRecord {
    bundled().get(name).unwrap_or_else(|_| panic!("no bundled knot {name}")).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_files_match_their_construction() {
        assert_eq!(bundled(), build_table());
        assert_eq!(bundled().to_json(), KNOTS_JSON);
        assert_eq!(scan6(), build_scan6());
        assert_eq!(scan6().to_json(), SCAN6_JSON);
        assert_eq!(KnotTable::from_csv(SCAN6_CSV).unwrap(), scan6());
    }
}
