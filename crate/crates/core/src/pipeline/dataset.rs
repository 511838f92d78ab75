use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Label;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NliInstance {
    pub pair_id: String,
    pub premise: String,
    pub hypothesis: String,
    pub label: Label,
    pub genre: Option<String>,
}

/// One line of the SNLI/MNLI distribution format. Unknown fields are ignored.
#[derive(Debug, Serialize, Deserialize)]
struct Row {
    sentence1: String,
    sentence2: String,
    gold_label: String,
    #[serde(rename = "pairID")]
    pair_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genre: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub instances: Vec<NliInstance>,
    /// Rows whose gold label is `-` (no annotator consensus).
    pub skipped_unlabeled: usize,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read dataset {path}")]
    Open { path: String, source: io::Error },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate pair id `{id}`")]
    DuplicateId { line: usize, id: String },
}

pub fn read_dataset(reader: impl BufRead) -> Result<Dataset, DatasetError> {
    let mut out = Dataset::default();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row: Row = serde_json::from_str(&line).map_err(|e| DatasetError::Malformed {
            line: n,
            message: e.to_string(),
        })?;
        if row.gold_label == "-" {
            out.skipped_unlabeled += 1;
            continue;
        }
        let label = row
            .gold_label
            .parse()
            .map_err(|message| DatasetError::Malformed { line: n, message })?;
        if !seen.insert(row.pair_id.clone()) {
            return Err(DatasetError::DuplicateId {
                line: n,
                id: row.pair_id,
            });
        }
        out.instances.push(NliInstance {
            pair_id: row.pair_id,
            premise: row.sentence1,
            hypothesis: row.sentence2,
            label,
            genre: row.genre,
        });
    }
    Ok(out)
}

pub fn load_dataset(path: &Path) -> Result<Dataset, DatasetError> {
    let file = File::open(path).map_err(|source| DatasetError::Open {
        path: path.display().to_string(),
        source,
    })?;
    read_dataset(BufReader::new(file))
}

/// Writes instances back in the input schema.
pub fn write_dataset(instances: &[NliInstance], mut out: impl Write) -> io::Result<()> {
    for inst in instances {
        let row = Row {
            sentence1: inst.premise.clone(),
            sentence2: inst.hypothesis.clone(),
            gold_label: inst.label.to_string(),
            pair_id: inst.pair_id.clone(),
            genre: inst.genre.clone(),
        };
        serde_json::to_writer(&mut out, &row)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
