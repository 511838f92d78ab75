use std::collections::{HashMap, HashSet};
use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pipeline::{ContrastRecord, Label, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionPair {
    pub pair_id: String,
    pub spec: String,
    pub pred_original: Label,
    pub pred_contrast: Label,
}

pub fn read_predictions(reader: impl BufRead) -> io::Result<Vec<PredictionPair>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", i + 1)))?,
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{} predictions match no record: {}", orphans.len(), format_keys(orphans))]
    Join { orphans: Vec<(String, String)> },
    #[error("spec `{0}` has no evaluable rows")]
    EmptySpec(String),
    #[error("more than one prediction for pair `{0}` under `{1}`")]
    DuplicatePrediction(String, String),
}

fn format_keys(keys: &[(String, String)]) -> String {
    keys.iter()
        .map(|(id, spec)| format!("{id} [{spec}]"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Exact counts for one spec; fractions are derived from them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecMetrics {
    pub spec: String,
    pub n: u64,
    pub ori_correct: u64,
    pub ctr_correct: u64,
    pub consistent: u64,
}

impl SpecMetrics {
    pub fn acc_at_ori(&self) -> f64 {
        self.ori_correct as f64 / self.n as f64
    }

    pub fn acc_at_ctr(&self) -> f64 {
        self.ctr_correct as f64 / self.n as f64
    }

    pub fn consistency(&self) -> f64 {
        self.consistent as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalReport {
    pub rows: Vec<SpecMetrics>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    spec: &'a str,
    n: u64,
    acc_at_ori: f64,
    acc_at_ctr: f64,
    consistency: f64,
    acc_at_ori_pct: String,
    acc_at_ctr_pct: String,
    consistency_pct: String,
}

impl EvalReport {
    pub fn get(&self, spec: &str) -> Option<&SpecMetrics> {
        self.rows.iter().find(|r| r.spec == spec)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<JsonRow> = self
            .rows
            .iter()
            .map(|r| JsonRow {
                spec: &r.spec,
                n: r.n,
                acc_at_ori: r.acc_at_ori(),
                acc_at_ctr: r.acc_at_ctr(),
                consistency: r.consistency(),
                acc_at_ori_pct: percent_2dp(r.ori_correct, r.n),
                acc_at_ctr_pct: percent_2dp(r.ctr_correct, r.n),
                consistency_pct: percent_2dp(r.consistent, r.n),
            })
            .collect();
        serde_json::json!({ "specs": rows })
    }

    /// Specs as columns; Acc@Ori, Acc@Ctr and Consistency as rows.
    pub fn render_table(&self) -> String {
        let mut grid: Vec<Vec<String>> = vec![vec!["".to_string()], vec!["n".to_string()]];
        grid.push(vec!["Acc@Ori".to_string()]);
        grid.push(vec!["Acc@Ctr".to_string()]);
        grid.push(vec!["Consistency".to_string()]);
        for r in &self.rows {
            grid[0].push(r.spec.clone());
            grid[1].push(r.n.to_string());
            grid[2].push(percent_2dp(r.ori_correct, r.n));
            grid[3].push(percent_2dp(r.ctr_correct, r.n));
            grid[4].push(percent_2dp(r.consistent, r.n));
        }
        let columns = grid[0].len();
        let widths: Vec<usize> = (0..columns)
            .map(|c| grid.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &grid {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(c, cell)| {
                    if c == 0 {
                        format!("{cell:<w$}", w = widths[c])
                    } else {
                        format!("{cell:>w$}", w = widths[c])
                    }
                })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// `100 * num / den` to two decimals, rounding half to even on the exact
/// rational value.
pub fn percent_2dp(num: u64, den: u64) -> String {
    if den == 0 {
        return "n/a".to_string();
    }
    let scaled = num as u128 * 10_000;
    let den = den as u128;
    let mut q = scaled / den;
    let r = scaled % den;
    if 2 * r > den || (2 * r == den && q % 2 == 1) {
        q += 1;
    }
    format!("{}.{:02}", q / 100, q % 100)
}

/// Joins predictions to records on (pair_id, spec). Only `ok` records are
/// scored; predictions for records with another status are dropped.
/// Specs appear in order of first appearance among the records.
pub fn evaluate(records: &[ContrastRecord], preds: &[PredictionPair]) -> Result<EvalReport, EvalError> {
    let by_key: HashMap<(&str, &str), &ContrastRecord> = records
        .iter()
        .map(|r| ((r.pair_id.as_str(), r.spec.as_str()), r))
        .collect();
    let mut orphans = Vec::new();
    let mut seen = HashSet::new();
    let mut counts: HashMap<&str, SpecMetrics> = HashMap::new();
    for p in preds {
        let key = (p.pair_id.as_str(), p.spec.as_str());
        if !seen.insert(key) {
            return Err(EvalError::DuplicatePrediction(p.pair_id.clone(), p.spec.clone()));
        }
        let Some(record) = by_key.get(&key) else {
            orphans.push((p.pair_id.clone(), p.spec.clone()));
            continue;
        };
        let m = counts.entry(record.spec.as_str()).or_insert_with(|| SpecMetrics {
            spec: record.spec.clone(),
            ..Default::default()
        });
        let (Status::Ok, Some(gold_ctr)) = (record.status, record.label_transformed) else {
            continue;
        };
        m.n += 1;
        m.ori_correct += u64::from(p.pred_original == record.label_original);
        m.ctr_correct += u64::from(p.pred_contrast == gold_ctr);
        m.consistent += u64::from(p.pred_original == p.pred_contrast);
    }
    if !orphans.is_empty() {
        return Err(EvalError::Join { orphans });
    }
    let mut rows = Vec::new();
    for r in records {
        if let Some(m) = counts.remove(r.spec.as_str()) {
            if m.n == 0 {
                return Err(EvalError::EmptySpec(m.spec));
            }
            rows.push(m);
        }
    }
    Ok(EvalReport { rows })
}
