use std::path::Path;

use accentgram_core::{Dataset, SpeakerRecord};

use crate::error::{CliError, CliResult};
use crate::report::{csv_num, write_atomic};

pub fn feature_column(k: usize) -> String {
    format!("mfcc_{k:02}")
}

/// `speaker_id,group,mfcc_01,...` with rows sorted by speaker_id.
pub fn features_csv(records: &[SpeakerRecord]) -> String {
    let width = records.first().map_or(0, |r| r.features.len());
    let mut sorted: Vec<&SpeakerRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.speaker_id.cmp(&b.speaker_id));
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["speaker_id".to_string(), "group".to_string()];
    header.extend((1..=width).map(feature_column));
    wtr.write_record(&header).unwrap();
    for r in sorted {
        let mut row = vec![r.speaker_id.clone(), r.group.clone()];
        row.extend(r.features.iter().map(|&v| csv_num(v)));
        wtr.write_record(&row).unwrap();
    }
    String::from_utf8(wtr.into_inner().unwrap()).unwrap()
}

pub fn write_features(path: &Path, records: &[SpeakerRecord]) -> CliResult<()> {
    write_atomic(path, features_csv(records).as_bytes())
}

pub fn read_features(path: &Path) -> CliResult<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| CliError::input(path, e.to_string()))?.clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 3 || cols[0] != "speaker_id" || cols[1] != "group" {
        return Err(CliError::input(
            path,
            "header must start with `speaker_id,group` followed by mfcc columns",
        ));
    }
    for (k, c) in cols[2..].iter().enumerate() {
        if *c != feature_column(k + 1) {
            return Err(CliError::input(
                path,
                format!("column {}: expected {}, got {c}", k + 3, feature_column(k + 1)),
            ));
        }
    }
    let mut records = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::input(path, format!("line {line}: {e}")))?;
        let features = rec
            .iter()
            .skip(2)
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| CliError::input(path, format!("line {line}: {e}")))?;
        records.push(SpeakerRecord {
            speaker_id: rec[0].to_string(),
            group: rec[1].to_string(),
            features,
        });
    }
    if records.is_empty() {
        return Err(CliError::input(path, "no data rows"));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(r) = records.iter().find(|r| !seen.insert(r.speaker_id.clone())) {
        return Err(CliError::input(
            path,
            format!("duplicate speaker_id {:?}", r.speaker_id),
        ));
    }
    Dataset::new(records).map_err(|e| CliError::input(path, e.to_string()))
}
