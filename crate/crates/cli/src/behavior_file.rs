//! Behavior files: `{"probs": [[p(AB|ab); 4]; 4], "labels": {...}}`.
//!
//! Rows are input pairs `ab ∈ {00, 01, 10, 11}`, columns output pairs
//! `AB ∈ {00, 01, 10, 11}`. A flat list of 16 numbers in the same order is
//! also accepted.

use std::fs;
use std::path::{Path, PathBuf};

use infocausality::BoxBehavior;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Rows off by more than this are rejected; smaller drift is renormalized.
pub const FILE_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry p({output:02b}|{input:02b}) = {value} is not a probability")]
    Entry { input: usize, output: usize, value: f64 },
    #[error("row for inputs {input:02b} sums to {sum}, off by more than {FILE_TOL}")]
    Normalization { input: usize, sum: f64 },
    #[error(transparent)]
    Behavior(#[from] infocausality::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbTable {
    Grouped([[f64; 4]; 4]),
    Flat([f64; 16]),
}

impl ProbTable {
    pub fn rows(&self) -> [[f64; 4]; 4] {
        match self {
            ProbTable::Grouped(rows) => *rows,
            ProbTable::Flat(flat) => std::array::from_fn(|i| std::array::from_fn(|o| flat[4 * i + o])),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorFile {
    pub probs: ProbTable,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub labels: Map<String, Value>,
}

impl BehaviorFile {
    pub fn from_behavior(behavior: &BoxBehavior) -> Self {
        Self { probs: ProbTable::Grouped(*behavior.probs()), labels: Map::new() }
    }

    /// Validates the table and returns it with each row rescaled to sum to 1.
    pub fn behavior(&self) -> Result<BoxBehavior, FormatError> {
        let mut rows = self.probs.rows();
        for (input, row) in rows.iter_mut().enumerate() {
            for (output, &value) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    return Err(FormatError::Entry { input, output, value });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > FILE_TOL {
                return Err(FormatError::Normalization { input, sum });
            }
            row.iter_mut().for_each(|p| *p /= sum);
        }
        Ok(BoxBehavior::new(rows)?)
    }
}

pub fn parse_behavior(text: &str) -> Result<BoxBehavior, FormatError> {
    serde_json::from_str::<BehaviorFile>(text)?.behavior()
}

pub fn load_behavior(path: &Path) -> Result<BoxBehavior, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Read { path: path.to_owned(), source })?;
    parse_behavior(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_one_round_trips() {
        let pr = BoxBehavior::pr_box();
        let text = serde_json::to_string(&BehaviorFile::from_behavior(&pr)).unwrap();
        assert_eq!(parse_behavior(&text).unwrap(), pr);
    }

    #[test]
    fn flat_layout() {
        let mut flat = vec![0.25; 16];
        flat[0] = 0.5;
        flat[1] = 0.0;
        let text = serde_json::json!({ "probs": flat, "labels": {"name": "skewed"} }).to_string();
        let b = parse_behavior(&text).unwrap();
        assert_eq!(b.probs()[0], [0.5, 0.0, 0.25, 0.25]);
    }

    #[test]
    fn small_drift_is_renormalized() {
        let row = [0.25 + 4e-10, 0.25, 0.25, 0.25];
        let text = serde_json::json!({ "probs": [row, row, row, row] }).to_string();
        let b = parse_behavior(&text).unwrap();
        for r in b.probs() {
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejections() {
        let row = [0.25, 0.25, 0.25, 0.25];
        let bad_sum = [0.25, 0.25, 0.25, 0.26];
        let text = serde_json::json!({ "probs": [row, bad_sum, row, row] }).to_string();
        assert!(matches!(parse_behavior(&text), Err(FormatError::Normalization { input: 1, .. })));

        let negative = [-0.25, 0.75, 0.25, 0.25];
        let text = serde_json::json!({ "probs": [row, row, negative, row] }).to_string();
        assert!(matches!(parse_behavior(&text), Err(FormatError::Entry { input: 2, output: 0, .. })));

        assert!(matches!(parse_behavior("{\"probs\": [1, 2]}"), Err(FormatError::Json(_))));
        assert!(matches!(parse_behavior("{\"probs\": [], \"extra\": 1}"), Err(FormatError::Json(_))));
    }

    #[test]
    fn signaling_tables_parse() {
        // A = b, B = 0 is a valid table; signaling is for callers to judge.
        let text = r#"{"probs": [[1,0,0,0],[0,0,1,0],[1,0,0,0],[0,0,1,0]]}"#;
        let b = parse_behavior(text).unwrap();
        assert!(!b.is_no_signaling(1e-12));
    }
}
