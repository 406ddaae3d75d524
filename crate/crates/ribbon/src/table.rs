//! Knot tables on disk.
//!
//! JSON is canonical: either a list of records or `{"schema": 1, "knots": [...]}`,
//! each record `{"name", "seifert", "pd"?}`. CSV has a header with columns
//! `name,seifert,pd`; `seifert` holds the entries row-major separated by `;`
//! and `pd` is optional, as `PD[X[..],..]` or a JSON list.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::obstruct::{KnotRecord, SCHEMA};
use crate::seifert::SeifertMatrix;
use crate::wirtinger::PDCode;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("duplicate knot name '{0}'")]
    Duplicate(String),
    #[error("{0}")]
    Record(#[from] crate::obstruct::RecordError),
    #[error("unknown knot '{0}'")]
    Unknown(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonTable {
    Wrapped { knots: Vec<KnotRecord> },
    Bare(Vec<KnotRecord>),
}

#[derive(Serialize)]
struct JsonOut<'a> {
    schema: u32,
    knots: &'a [KnotRecord],
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KnotTable {
    pub records: Vec<KnotRecord>,
}

impl KnotTable {
    /// Checks unique names and PD/Seifert consistency.
    pub fn new(records: Vec<KnotRecord>) -> Result<Self, TableError> {
        let mut seen = BTreeSet::new();
        for r in &records {
            if !seen.insert(r.name.clone()) {
                return Err(TableError::Duplicate(r.name.clone()));
            }
            r.validate()?;
        }
        Ok(KnotTable { records })
    }

    pub fn from_json(s: &str) -> Result<Self, TableError> {
        let records = match serde_json::from_str(s)? {
            JsonTable::Wrapped { knots } => knots,
            JsonTable::Bare(k) => k,
        };
        Self::new(records)
    }

    pub fn from_csv(s: &str) -> Result<Self, TableError> {
        let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(s.as_bytes());
        let mut records = Vec::new();
        for row in reader.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            let err = |message: String| TableError::Row { line, message };
            let name = row.get(0).filter(|n| !n.is_empty()).ok_or_else(|| err("missing name".into()))?;
            let entries = row
                .get(1)
                .ok_or_else(|| err("missing Seifert matrix".into()))?
                .split(';')
                .filter(|e| !e.trim().is_empty())
                .map(|e| e.trim().parse::<i64>().map_err(|e| err(format!("bad Seifert entry: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let n = (entries.len() as f64).sqrt().round() as usize;
            if n * n != entries.len() {
                return Err(err(format!("{} entries do not form a square matrix", entries.len())));
            }
            let rows: Vec<Vec<i64>> = entries.chunks(n.max(1)).map(|c| c.to_vec()).collect();
            let seifert = if n == 0 { SeifertMatrix::unknot() } else { SeifertMatrix::from_rows(&rows).map_err(|e| err(e.to_string()))? };
            let pd = match row.get(2).filter(|p| !p.is_empty()) {
                Some(p) => Some(p.parse::<PDCode>().map_err(|e| err(e.to_string()))?),
                None => None,
            };
            records.push(KnotRecord::new(name, seifert, pd)?);
        }
        Self::new(records)
    }

    /// Reads JSON, or CSV when the extension is `.csv`.
    pub fn load(path: &Path) -> Result<Self, TableError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            Self::from_csv(&text)
        } else {
            Self::from_json(&text)
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&JsonOut { schema: SCHEMA, knots: &self.records }).unwrap();
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "seifert", "pd"]).unwrap();
        for r in &self.records {
            let m = r.seifert.matrix();
            let entries: Vec<String> = (0..m.rows()).flat_map(|i| m.row(i).iter().map(|x| x.to_string())).collect();
            let pd = r.pd.as_ref().map(|p| p.to_string()).unwrap_or_default();
            w.write_record([r.name.as_str(), &entries.join(";"), &pd]).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn get(&self, name: &str) -> Result<&KnotRecord, TableError> {
        self.records.iter().find(|r| r.name == name).ok_or_else(|| TableError::Unknown(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.records.iter().map(|r| r.name.as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL_JSON: &str = r#"[{"name": "3_1", "seifert": [[-1,0],[-1,-1]], "pd": "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]"}]"#;

    #[test]
    fn json_forms() {
        let t = KnotTable::from_json(TREFOIL_JSON).unwrap();
        assert_eq!(t.names(), vec!["3_1"]);
        let back = KnotTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(t.to_json().contains("\"schema\": 1"));
    }

    #[test]
    fn json_errors() {
        match KnotTable::from_json("[{\"name\": \"a\",\n \"seifert\": [[1,0],[1]]") {
            Err(TableError::Json(e)) => assert!(e.line() >= 1),
            other => panic!("{other:?}"),
        }
        let dup = format!("[{0},{0}]", &TREFOIL_JSON[1..TREFOIL_JSON.len() - 1]);
        assert!(matches!(KnotTable::from_json(&dup), Err(TableError::Duplicate(_))));
        let bad = r#"[{"name": "x", "seifert": [[1,1],[1,1]]}]"#;
        assert!(KnotTable::from_json(bad).is_err());
        assert!(matches!(KnotTable::from_json(TREFOIL_JSON).unwrap().get("4_1"), Err(TableError::Unknown(_))));
    }

    #[test]
    fn csv_round_trip() {
        let csv = "name,seifert,pd\n3_1,-1;0;-1;-1,\"PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]\"\n4_1,1;0;-1;-1,\n";
        let t = KnotTable::from_csv(csv).unwrap();
        assert_eq!(t.names(), vec!["3_1", "4_1"]);
        assert!(t.records[1].pd.is_none());
        assert_eq!(KnotTable::from_csv(&t.to_csv()).unwrap(), t);
        assert!(matches!(KnotTable::from_csv("name,seifert\nx,1;2;3\n"), Err(TableError::Row { line: 2, .. })));
    }
}
