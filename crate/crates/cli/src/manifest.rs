use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

pub const HEADER: [&str; 3] = ["path", "group", "speaker_id"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRow {
    /// Resolved path to the WAV file.
    pub path: PathBuf,
    pub group: String,
    pub speaker_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    pub fn groups(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.rows.iter().map(|r| r.group.as_str()).collect();
        set.into_iter().collect()
    }
}

/// Reads and validates a manifest. Relative paths resolve against
/// `audio_root`, or the manifest's own directory when none is given.
pub fn load_manifest(path: &Path, audio_root: Option<&Path>) -> CliResult<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let base = match audio_root {
        Some(r) => r.to_path_buf(),
        None => path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| CliError::input(path, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(CliError::input(
            path,
            format!(
                "header must be exactly `path,group,speaker_id`, got `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut rows = Vec::new();
    let mut ids = HashSet::new();
    let mut paths = HashSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::input(path, format!("line {line}: {e}")))?;
        let (p, group, id) = (rec[0].trim(), rec[1].trim(), rec[2].trim());
        if p.is_empty() || group.is_empty() || id.is_empty() {
            return Err(CliError::input(path, format!("line {line}: empty field")));
        }
        if !ids.insert(id.to_string()) {
            return Err(CliError::input(
                path,
                format!("line {line}: duplicate speaker_id {id:?}"),
            ));
        }
        let resolved = base.join(p);
        if !paths.insert(resolved.clone()) {
            return Err(CliError::input(path, format!("line {line}: duplicate path {p:?}")));
        }
        if !resolved.is_file() {
            return Err(CliError::input(
                path,
                format!("line {line}: audio file not found: {}", resolved.display()),
            ));
        }
        rows.push(ManifestRow {
            path: resolved,
            group: group.to_string(),
            speaker_id: id.to_string(),
        });
    }
    if rows.is_empty() {
        return Err(CliError::input(path, "manifest has no rows"));
    }
    let m = Manifest { rows };
    let groups = m.groups();
    if groups.len() != 2 {
        return Err(CliError::input(
            path,
            format!(
                "expected exactly 2 groups, found {}: {}",
                groups.len(),
                groups.join(", ")
            ),
        ));
    }
    Ok(m)
}
