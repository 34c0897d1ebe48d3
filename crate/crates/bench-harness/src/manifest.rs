//! Source-manifest ingestion: a labels CSV plus a directory of WAV clips
//! becomes a validated JSONL manifest of source records.

use crate::error::HarnessError;
use perturbations::SourceRecord;
use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;
use tws_engine::EmotionLabel;

/// Reads `utterance_id,label` rows, checks labels against the seven-way
/// set, and verifies `<audio_dir>/<utterance_id>.wav` exists.
pub fn build_manifest(
    audio_dir: &Path,
    labels_file: &Path,
) -> Result<Vec<SourceRecord>, HarnessError> {
    let mut reader = csv::Reader::from_path(labels_file)
        .map_err(|e| HarnessError::Data(format!("cannot read {}: {e}", labels_file.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| HarnessError::Data(e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["utterance_id", "label"] {
        return Err(HarnessError::Data(format!(
            "labels file must have header utterance_id,label, got {headers:?}"
        )));
    }
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| HarnessError::Data(e.to_string()))?;
        let line = i + 2;
        let id = row.get(0).unwrap_or("").to_string();
        let label = row.get(1).unwrap_or("").to_string();
        if EmotionLabel::parse(&label).is_none() {
            return Err(HarnessError::Data(format!(
                "row {line}: unknown label {label:?} for {id}"
            )));
        }
        if !seen.insert(id.clone()) {
            return Err(HarnessError::Data(format!(
                "row {line}: duplicate utterance_id {id}"
            )));
        }
        let source_path = audio_dir.join(format!("{id}.wav"));
        if !source_path.is_file() {
            return Err(HarnessError::Data(format!(
                "row {line}: missing audio {}",
                source_path.display()
            )));
        }
        records.push(SourceRecord {
            utterance_id: id,
            source_path,
            label,
        });
    }
    Ok(records)
}

pub fn write_source_manifest(
    path: &Path,
    records: &[SourceRecord],
) -> Result<(), HarnessError> {
    let io_err = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
    for r in records {
        let line = serde_json::to_string(r).expect("record serializes");
        writeln!(file, "{line}").map_err(io_err)?;
    }
    file.flush().map_err(io_err)
}

pub fn read_source_manifest(path: &Path) -> Result<Vec<SourceRecord>, HarnessError> {
    let file = std::fs::File::open(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    std::io::BufReader::new(file)
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.map_err(|source| HarnessError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            serde_json::from_str(&line).map_err(|e| {
                HarnessError::Data(format!(
                    "{} line {}: {e}",
                    path.display(),
                    i + 1
                ))
            })
        })
        .collect()
}
